#ifndef LEXACQ_LEXACQ_HPP
#define LEXACQ_LEXACQ_HPP

#include "config.hpp"
#include "corpus.hpp"
#include "dictionary.hpp"
#include "errors.hpp"
#include "eval.hpp"
#include "hypothesizer.hpp"
#include "learner.hpp"
#include "lifecycle.hpp"
#include "matcher.hpp"
#include "parser.hpp"
#include "rng.hpp"
#include "symbols.hpp"
#include "types.hpp"

#endif  // LEXACQ_LEXACQ_HPP
