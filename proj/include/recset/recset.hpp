#pragma once

// Umbrella header.

#include "recset/core.hpp"
#include "recset/random.hpp"
#include "recset/element.hpp"
#include "recset/codes.hpp"
#include "recset/niveau.hpp"
#include "recset/counting.hpp"
#include "recset/finite_set.hpp"
#include "recset/verdict.hpp"
#include "recset/coloring.hpp"
#include "recset/recurrence.hpp"
#include "recset/sampler.hpp"
#include "recset/construction.hpp"
#include "recset/lemmas.hpp"
#include "recset/explorer.hpp"
#include "recset/report.hpp"
