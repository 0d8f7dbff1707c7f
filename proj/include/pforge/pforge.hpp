#pragma once

#include "pforge/catalog.hpp"
#include "pforge/classify.hpp"
#include "pforge/derivation.hpp"
#include "pforge/divisor.hpp"
#include "pforge/errors.hpp"
#include "pforge/factor.hpp"
#include "pforge/field.hpp"
#include "pforge/groebner.hpp"
#include "pforge/io.hpp"
#include "pforge/linalg.hpp"
#include "pforge/ore.hpp"
#include "pforge/poisson.hpp"
#include "pforge/poly.hpp"
#include "pforge/rational.hpp"
#include "pforge/substitution.hpp"
