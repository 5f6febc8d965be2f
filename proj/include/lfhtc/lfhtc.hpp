#pragma once

#include "lfhtc/error.hpp"
#include "lfhtc/node_set.hpp"
#include "lfhtc/graph.hpp"
#include "lfhtc/graph_io.hpp"
#include "lfhtc/canonical.hpp"
#include "lfhtc/flow.hpp"
#include "lfhtc/criterion.hpp"
#include "lfhtc/cert_io.hpp"
#include "lfhtc/htc.hpp"
#include "lfhtc/rational.hpp"
#include "lfhtc/model.hpp"
#include "lfhtc/matrix_io.hpp"
#include "lfhtc/identify.hpp"
#include "lfhtc/dimension.hpp"
#include "lfhtc/cnf.hpp"
#include "lfhtc/enumerate.hpp"
