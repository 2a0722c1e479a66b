#pragma once

#include "qesboson/errors.hpp"
#include "qesboson/scalar.hpp"
#include "qesboson/boson.hpp"
#include "qesboson/fock.hpp"
#include "qesboson/polynomial.hpp"
#include "qesboson/linalg.hpp"
#include "qesboson/diff_operator.hpp"
#include "qesboson/algebra.hpp"
#include "qesboson/spectrum.hpp"
#include "qesboson/qes.hpp"
#include "qesboson/models.hpp"
#include "qesboson/oracle.hpp"
#include "qesboson/io.hpp"
