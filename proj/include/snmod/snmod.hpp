#pragma once

#include "snmod/error.hpp"
#include "snmod/geometry.hpp"
#include "snmod/geograph.hpp"
#include "snmod/load.hpp"
#include "snmod/partition.hpp"
#include "snmod/metrics.hpp"
#include "snmod/louvain.hpp"
#include "snmod/snic.hpp"
#include "snmod/oracle.hpp"
#include "snmod/sampler.hpp"
#include "snmod/synthetic.hpp"
#include "snmod/harness.hpp"
#include "snmod/io.hpp"
