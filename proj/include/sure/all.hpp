#pragma once

#include "confidence_qp.hpp"
#include "dataset.hpp"
#include "error.hpp"
#include "experiment.hpp"
#include "folds.hpp"
#include "kernel.hpp"
#include "metrics.hpp"
#include "model_io.hpp"
#include "plknn.hpp"
#include "pld_io.hpp"
#include "random.hpp"
#include "report.hpp"
#include "ridge.hpp"
#include "sure.hpp"
#include "synthetic.hpp"
#include "ttest.hpp"
