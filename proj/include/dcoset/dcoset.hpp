#pragma once

#include "dcoset/averaging.hpp"
#include "dcoset/charted_group.hpp"
#include "dcoset/coset_space.hpp"
#include "dcoset/errors.hpp"
#include "dcoset/finite_group.hpp"
#include "dcoset/group_core.hpp"
#include "dcoset/measure.hpp"
#include "dcoset/quadrature.hpp"
#include "dcoset/rho.hpp"
#include "dcoset/subgroup.hpp"
#include "dcoset/test_function.hpp"

#include "dcoset/harness/catalog.hpp"
#include "dcoset/harness/config.hpp"
#include "dcoset/harness/report.hpp"
#include "dcoset/harness/runner.hpp"
#include "dcoset/harness/ship_suite.hpp"
