#pragma once

#include "fdmimo/butterworth.hpp"
#include "fdmimo/channel_io.hpp"
#include "fdmimo/electrode_graph.hpp"
#include "fdmimo/error.hpp"
#include "fdmimo/estimators.hpp"
#include "fdmimo/evaluation.hpp"
#include "fdmimo/frontend.hpp"
#include "fdmimo/random.hpp"
#include "fdmimo/recording.hpp"
#include "fdmimo/synthetic.hpp"
