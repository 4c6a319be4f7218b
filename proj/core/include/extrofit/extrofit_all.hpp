#pragma once

#include "extrofit/embedding_io.hpp"
#include "extrofit/error.hpp"
#include "extrofit/eval.hpp"
#include "extrofit/extrofit.hpp"
#include "extrofit/lexicon.hpp"
#include "extrofit/linalg.hpp"
#include "extrofit/retrofit.hpp"
