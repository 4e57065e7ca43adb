#ifndef OTDL_OTDL_HPP
#define OTDL_OTDL_HPP

#include "otdl/alphabet.hpp"
#include "otdl/compact_tag.hpp"
#include "otdl/lexicon.hpp"
#include "otdl/lookup.hpp"
#include "otdl/madfa.hpp"
#include "otdl/morphgraph.hpp"
#include "otdl/rules.hpp"

#endif // OTDL_OTDL_HPP
