#pragma once

#include "apimine/cluster.hpp"
#include "apimine/compbuild.hpp"
#include "apimine/context.hpp"
#include "apimine/error.hpp"
#include "apimine/eval.hpp"
#include "apimine/fupmine.hpp"
#include "apimine/interfaces.hpp"
#include "apimine/metrics.hpp"
#include "apimine/model.hpp"
#include "apimine/model_io.hpp"
#include "apimine/parallel.hpp"
#include "apimine/pipeline.hpp"
#include "apimine/report.hpp"
#include "apimine/run.hpp"
#include "apimine/synth.hpp"
#include "apimine/usage.hpp"
