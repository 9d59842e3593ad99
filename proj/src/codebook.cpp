#include "omac/codebook.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

namespace omac {

namespace {
void check_book(const std::vector<Word>& book, std::size_t n, std::size_t q, const char* name) {
    if (book.empty()) throw std::invalid_argument(std::string(name) + " is empty");
    std::set<Word> seen;
    for (const auto& w : book) {
        if (w.size() != n) throw std::invalid_argument(std::string(name) + ": codeword length differs from n");
        for (Symbol s : w)
            if (s >= q) throw std::invalid_argument(std::string(name) + ": symbol out of range");
        if (!seen.insert(w).second) throw std::invalid_argument(std::string(name) + ": repeated codeword");
    }
}
}  // namespace

void check_code_pair(const CodePair& code, std::size_t q1, std::size_t q2) {
    if (code.n == 0) throw std::invalid_argument("blocklength must be positive");
    check_book(code.book1, code.n, q1, "book1");
    check_book(code.book2, code.n, q2, "book2");
}

double empirical_rate(std::size_t m, std::size_t n, std::size_t alphabet_size) {
    if (m <= 1 || alphabet_size <= 1) return 0.0;
    return std::log(static_cast<double>(m)) / (static_cast<double>(n) * std::log(static_cast<double>(alphabet_size)));
}

}  // namespace omac
