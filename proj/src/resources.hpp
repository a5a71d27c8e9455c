#pragma once

#include <string_view>

// Data files compiled into the library (see data/ and CMakeLists.txt).
namespace tagcorrupt::resources {

std::string_view lexicon_words();
std::string_view inflection_tables();
std::string_view word_lists();

}  // namespace tagcorrupt::resources
