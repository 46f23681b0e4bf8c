#pragma once

#include "lcachar/beurling.hpp"
#include "lcachar/cc_function.hpp"
#include "lcachar/characters.hpp"
#include "lcachar/error.hpp"
#include "lcachar/group.hpp"
#include "lcachar/lemma_escape.hpp"
#include "lcachar/parallel.hpp"
#include "lcachar/recovery.hpp"
