#pragma once

#include "kw/angle.hpp"
#include "kw/builders.hpp"
#include "kw/cocycle.hpp"
#include "kw/document.hpp"
#include "kw/dual.hpp"
#include "kw/error.hpp"
#include "kw/identities.hpp"
#include "kw/isomorphism.hpp"
#include "kw/kacward.hpp"
#include "kw/laplacian.hpp"
#include "kw/linalg.hpp"
#include "kw/map.hpp"
#include "kw/oracles.hpp"
#include "kw/rational.hpp"
#include "kw/rng.hpp"
#include "kw/spin.hpp"
