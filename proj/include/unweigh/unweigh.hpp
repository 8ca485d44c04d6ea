/*
 * Copyright (c) 2025 the unweigh developers.
 * SPDX-License-Identifier: MIT
 */
#pragma once

#include <unweigh/chain.hpp>
#include <unweigh/common.hpp>
#include <unweigh/count.hpp>
#include <unweigh/formula.hpp>
#include <unweigh/rational.hpp>
#include <unweigh/reduce.hpp>
#include <unweigh/selftest.hpp>
