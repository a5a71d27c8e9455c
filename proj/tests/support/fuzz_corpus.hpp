#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "tagcorrupt/tags.hpp"

namespace tagcorrupt::fuzz {

// Grammatical template sentences with many corruption sites per sentence.
std::vector<std::string> fuzz_sentences(std::size_t n, std::uint64_t seed);

// Fixed non-uniform distribution over all 25 tags, shaped like learner data.
TagDistribution skewed_distribution();

}  // namespace tagcorrupt::fuzz
