#pragma once

#include "errors.hpp"
#include "words.hpp"
#include "whgraph.hpp"
#include "axes.hpp"
#include "subgroups.hpp"
#include "rjsj.hpp"
#include "geometry.hpp"
#include "io.hpp"
