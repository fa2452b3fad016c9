#include "doctest.h"

#include <cstdio>
#include <fstream>

#include "moec/dataset.hpp"
#include "moec/rng.hpp"
#include "oracles.hpp"

using namespace moec;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name, const std::string& content)
        : path("moec_test_" + name) {
        std::ofstream os(path);
        os << content;
    }
    ~TempFile() { std::remove(path.c_str()); }
};

Dataset from_rows(const std::vector<std::vector<double>>& rows) {
    Dataset ds;
    ds.dim = static_cast<int>(rows[0].size());
    for (auto& r : rows)
        for (double v : r) ds.features.push_back(v);
    return ds;
}

} // namespace

TEST_CASE("euclidean basics") {
    std::vector<double> a{0, 0}, b{3, 4};
    CHECK(euclidean(a, b) == doctest::Approx(5.0));
    CHECK(euclidean(a, a) == 0.0);
    std::vector<double> c{1, 2, 3};
    CHECK_THROWS_AS(euclidean(a, c), std::invalid_argument);
}

TEST_CASE("euclidean matches compensated-summation oracle on random 5-d pairs") {
    Rng rng(7);
    for (int t = 0; t < 200; ++t) {
        std::vector<double> a(5), b(5);
        for (int i = 0; i < 5; ++i) {
            a[i] = rng.next_real() * 200.0 - 100.0;
            b[i] = rng.next_real() * 200.0 - 100.0;
        }
        CHECK(euclidean(a, b) == doctest::Approx(oracle::euclidean_kahan(a, b)).epsilon(1e-12));
    }
}

TEST_CASE("euclidean triangle inequality on random triples") {
    Rng rng(8);
    for (int t = 0; t < 300; ++t) {
        std::vector<double> a(3), b(3), c(3);
        for (int i = 0; i < 3; ++i) {
            a[i] = rng.next_real() * 10;
            b[i] = rng.next_real() * 10;
            c[i] = rng.next_real() * 10;
        }
        CHECK(euclidean(a, c) <= euclidean(a, b) + euclidean(b, c) + 1e-9);
    }
}

TEST_CASE("partition_from_labels densifies in first-occurrence order") {
    auto p = partition_from_labels(std::vector<long long>{7, 7, 2, 7});
    CHECK(p.assign == std::vector<int>{0, 0, 1, 0});
    CHECK(p.k == 2);

    auto single = partition_from_labels(std::vector<long long>{5});
    CHECK(single.assign == std::vector<int>{0});
    CHECK(single.k == 1);

    CHECK_THROWS_AS(partition_from_labels(std::vector<long long>{}), std::invalid_argument);
}

TEST_CASE("partition_from_labels is invariant under bijective relabeling") {
    Rng rng(11);
    for (int t = 0; t < 50; ++t) {
        int n = 3 + static_cast<int>(rng.next_index(20));
        std::vector<long long> raw(n);
        for (auto& v : raw) v = static_cast<long long>(rng.next_index(6)) * 13 + 100;
        auto p1 = partition_from_labels(raw);
        // apply a bijection: x -> 3x + 1
        std::vector<long long> mapped(raw);
        for (auto& v : mapped) v = 3 * v + 1;
        auto p2 = partition_from_labels(mapped);
        CHECK(oracle::comembership(p1) == oracle::comembership(p2));
        CHECK(p1.valid());
    }
}

TEST_CASE("build_neighbor_table hand case and tie rule") {
    auto ds = from_rows({{0}, {1}, {3}});
    auto nt = build_neighbor_table(ds, 2);
    CHECK(nt.row(1)[0] == 0);
    CHECK(nt.row(1)[1] == 2);

    // duplicated points at equal distance: lower index first
    auto dup = from_rows({{0}, {2}, {2}, {4}});
    auto nt2 = build_neighbor_table(dup, 3);
    CHECK(nt2.row(0)[0] == 1);
    CHECK(nt2.row(0)[1] == 2);
    CHECK(nt2.row(3)[0] == 1);

    CHECK_THROWS_AS(build_neighbor_table(ds, 3), std::invalid_argument);
}

TEST_CASE("build_neighbor_table equals full-sort oracle on random data") {
    Rng rng(21);
    Dataset ds;
    ds.dim = 3;
    for (int i = 0; i < 50 * 3; ++i) ds.features.push_back(rng.next_real() * 4.0);
    auto nt = build_neighbor_table(ds, 12);
    auto ref = oracle::nn_full_sort(ds, 12);
    for (int i = 0; i < 50; ++i) {
        auto row = nt.row(i);
        for (int p = 0; p < 12; ++p) {
            CHECK(row[p] == ref[i][p]);
            CHECK(row[p] != i);
        }
        for (int p = 1; p < 12; ++p)
            CHECK(point_dist(ds, i, row[p - 1]) <= point_dist(ds, i, row[p]));
    }
}

TEST_CASE("load_dataset with separate label file") {
    TempFile feats("feat.csv", "0,0\n1,0\n0,1\n");
    TempFile labs("feat.labels", "0\n0\n1\n");
    auto ds = load_dataset(feats.path, LabelMode::SeparateFile, labs.path);
    CHECK(ds.n() == 3);
    CHECK(ds.dim == 2);
    CHECK(ds.true_k() == 2);
}

TEST_CASE("load_dataset embedded labels and header skip") {
    TempFile f("emb.csv", "x,y,label\n0,0,4\n1,0,4\n0,1,9\n");
    auto ds = load_dataset(f.path, LabelMode::EmbeddedLastColumn, "", true);
    CHECK(ds.n() == 3);
    CHECK(ds.dim == 2);
    CHECK(ds.true_k() == 2);
    CHECK(ds.truth->assign == std::vector<int>{0, 0, 1});
}

TEST_CASE("load_dataset error paths") {
    TempFile bad("bad.csv", "1,x\n2,3\n");
    CHECK_THROWS_WITH_AS(load_dataset(bad.path, LabelMode::None),
                         doctest::Contains("parse error"), std::runtime_error);

    TempFile ragged("ragged.csv", "1,2\n3\n");
    CHECK_THROWS_WITH_AS(load_dataset(ragged.path, LabelMode::None),
                         doctest::Contains("format error"), std::runtime_error);

    TempFile feats("f2.csv", "0,0\n1,0\n0,1\n");
    TempFile labs("f2.labels", "0\n1\n");
    CHECK_THROWS_WITH_AS(load_dataset(feats.path, LabelMode::SeparateFile, labs.path),
                         doctest::Contains("mismatch"), std::runtime_error);
}
