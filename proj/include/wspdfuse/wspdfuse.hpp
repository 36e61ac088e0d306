#pragma once

#include "wspdfuse/error.hpp"
#include "wspdfuse/geometry.hpp"
#include "wspdfuse/meb.hpp"
#include "wspdfuse/split_tree.hpp"
#include "wspdfuse/wspd.hpp"
#include "wspdfuse/path_metric.hpp"
#include "wspdfuse/clustering.hpp"
#include "wspdfuse/datagen.hpp"
#include "wspdfuse/pipeline.hpp"
#include "wspdfuse/bench.hpp"
