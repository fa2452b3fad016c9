#ifndef MOEC_MOEC_HPP
#define MOEC_MOEC_HPP

#include "moec/base_clusterers.hpp"
#include "moec/bench.hpp"
#include "moec/dataset.hpp"
#include "moec/encoding.hpp"
#include "moec/init.hpp"
#include "moec/mocle.hpp"
#include "moec/moea.hpp"
#include "moec/mst.hpp"
#include "moec/objectives.hpp"
#include "moec/rng.hpp"
#include "moec/stats.hpp"
#include "moec/synth.hpp"

#endif
