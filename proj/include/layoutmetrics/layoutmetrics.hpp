#pragma once

// Umbrella header for the whole library.

#include "layoutmetrics/config.hpp"
#include "layoutmetrics/corpus.hpp"
#include "layoutmetrics/editdistance.hpp"
#include "layoutmetrics/errors.hpp"
#include "layoutmetrics/html.hpp"
#include "layoutmetrics/matching.hpp"
#include "layoutmetrics/normalize.hpp"
#include "layoutmetrics/ordermetrics.hpp"
#include "layoutmetrics/report.hpp"
#include "layoutmetrics/reward.hpp"
#include "layoutmetrics/schema.hpp"
#include "layoutmetrics/tablemetrics.hpp"
#include "layoutmetrics/textmetrics.hpp"
#include "layoutmetrics/utf8.hpp"
