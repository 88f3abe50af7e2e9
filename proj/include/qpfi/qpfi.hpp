#pragma once

#include "asymptotic.hpp"
#include "biconvex.hpp"
#include "bounds.hpp"
#include "choi.hpp"
#include "classical.hpp"
#include "core.hpp"
#include "errors.hpp"
#include "fisher.hpp"
#include "linalg.hpp"
#include "pure.hpp"
