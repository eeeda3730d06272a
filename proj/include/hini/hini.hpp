#pragma once

#include "hini/bench.hpp"
#include "hini/hin_graph.hpp"
#include "hini/io.hpp"
#include "hini/metapath.hpp"
#include "hini/models.hpp"
#include "hini/path_tree.hpp"
#include "hini/pcrw.hpp"
#include "hini/report.hpp"
#include "hini/simsearch.hpp"
#include "hini/synth.hpp"
#include "hini/types.hpp"
