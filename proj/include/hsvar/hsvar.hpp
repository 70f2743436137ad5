#pragma once

// Umbrella header for the heteroskedastic-SVAR identification library.

#include "hsvar/bivariate.hpp"
#include "hsvar/bounds.hpp"
#include "hsvar/config.hpp"
#include "hsvar/csv.hpp"
#include "hsvar/dataset.hpp"
#include "hsvar/errors.hpp"
#include "hsvar/gibbs.hpp"
#include "hsvar/het_test.hpp"
#include "hsvar/ident.hpp"
#include "hsvar/linalg.hpp"
#include "hsvar/pipeline.hpp"
#include "hsvar/reduced_form.hpp"
#include "hsvar/restriction_parser.hpp"
#include "hsvar/restrictions.hpp"
#include "hsvar/rng.hpp"
#include "hsvar/simulate.hpp"
#include "hsvar/version.hpp"
