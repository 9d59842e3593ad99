#pragma once

#include "omac/tensor.hpp"

#include <vector>

namespace omac {

struct CodePair {
    std::vector<Word> book1, book2;
    std::size_t n = 0;

    std::size_t m1() const { return book1.size(); }
    std::size_t m2() const { return book2.size(); }
};

// Throws if lengths differ, books are empty, or a book repeats a codeword.
void check_code_pair(const CodePair& code, std::size_t q1, std::size_t q2);

// log M / (n log |X|)
double empirical_rate(std::size_t m, std::size_t n, std::size_t alphabet_size);

}  // namespace omac
