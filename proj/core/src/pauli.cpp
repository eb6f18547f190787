#include "riemflow/pauli.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>

#include "detail/number_format.hpp"

namespace riemflow {

namespace {

constexpr int kMaxWireBits = 64;
constexpr double kMergeDropThreshold = 1e-14;

std::uint64_t wire_bit(int wire) { return std::uint64_t{1} << wire; }

void check_qubit_count(int n_qubits) {
  if (n_qubits < 1 || n_qubits > kMaxWireBits) {
    throw std::invalid_argument("qubit count must be in [1, 64], got " +
                                std::to_string(n_qubits));
  }
}

std::complex<double> i_power(int exponent) {
  switch (exponent & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

}  // namespace

char letter_to_char(PauliLetter letter) {
  switch (letter) {
    case PauliLetter::I: return 'I';
    case PauliLetter::X: return 'X';
    case PauliLetter::Y: return 'Y';
    case PauliLetter::Z: return 'Z';
  }
  throw std::invalid_argument("invalid Pauli letter");
}

PauliWord::PauliWord(int n_qubits, std::uint64_t x_mask, std::uint64_t z_mask)
    : n_qubits_(n_qubits), x_mask_(x_mask), z_mask_(z_mask) {
  check_qubit_count(n_qubits);
  const std::uint64_t valid =
      n_qubits == kMaxWireBits ? ~std::uint64_t{0} : wire_bit(n_qubits) - 1;
  if ((x_mask & ~valid) != 0 || (z_mask & ~valid) != 0) {
    throw std::invalid_argument("Pauli word mask exceeds qubit count");
  }
}

PauliWord PauliWord::identity(int n_qubits) { return {n_qubits, 0, 0}; }

PauliWord PauliWord::single(int n_qubits, int wire, PauliLetter letter) {
  check_qubit_count(n_qubits);
  if (wire < 0 || wire >= n_qubits) {
    throw std::invalid_argument("wire index out of range");
  }
  const std::uint64_t b = wire_bit(wire);
  switch (letter) {
    case PauliLetter::I: return {n_qubits, 0, 0};
    case PauliLetter::X: return {n_qubits, b, 0};
    case PauliLetter::Y: return {n_qubits, b, b};
    case PauliLetter::Z: return {n_qubits, 0, b};
  }
  throw std::invalid_argument("invalid Pauli letter");
}

PauliLetter PauliWord::letter(int wire) const {
  if (wire < 0 || wire >= n_qubits_) {
    throw std::invalid_argument("wire index out of range");
  }
  const bool x = (x_mask_ >> wire) & 1;
  const bool z = (z_mask_ >> wire) & 1;
  if (x && z) return PauliLetter::Y;
  if (x) return PauliLetter::X;
  if (z) return PauliLetter::Z;
  return PauliLetter::I;
}

int PauliWord::weight() const {
  return std::popcount(x_mask_ | z_mask_);
}

std::string PauliWord::to_string() const {
  if (is_identity()) return "I";
  std::string out;
  for (int w = 0; w < n_qubits_; ++w) {
    const PauliLetter l = letter(w);
    if (l == PauliLetter::I) continue;
    out += letter_to_char(l);
    out += std::to_string(w);
  }
  return out;
}

bool word_less(const PauliWord& a, const PauliWord& b) {
  const int wa = a.weight();
  const int wb = b.weight();
  if (wa != wb) return wa < wb;
  const int n = std::max(a.n_qubits(), b.n_qubits());
  // Equal weight: compare the sorted support index tuples first. At the
  // first wire where exactly one word has support, that word's index tuple
  // is lexicographically smaller.
  for (int w = 0; w < n; ++w) {
    const bool sa = w < a.n_qubits() && a.letter(w) != PauliLetter::I;
    const bool sb = w < b.n_qubits() && b.letter(w) != PauliLetter::I;
    if (sa != sb) return sa;
  }
  // Identical supports: letter order X < Y < Z, wire by wire.
  for (int w = 0; w < n; ++w) {
    const PauliLetter la = w < a.n_qubits() ? a.letter(w) : PauliLetter::I;
    const PauliLetter lb = w < b.n_qubits() ? b.letter(w) : PauliLetter::I;
    if (la != lb) return static_cast<int>(la) < static_cast<int>(lb);
  }
  return false;
}

WordProduct word_multiply(const PauliWord& p, const PauliWord& q) {
  if (p.n_qubits() != q.n_qubits()) {
    throw std::invalid_argument("word_multiply: qubit counts differ");
  }
  // With W = i^{|x&z|} X^x Z^z, commuting Z^z1 past X^x2 contributes
  // (-1)^{|z1&x2|}; the remaining i-powers re-normalize the product word.
  const std::uint64_t x3 = p.x_mask() ^ q.x_mask();
  const std::uint64_t z3 = p.z_mask() ^ q.z_mask();
  const int y1 = std::popcount(p.x_mask() & p.z_mask());
  const int y2 = std::popcount(q.x_mask() & q.z_mask());
  const int y3 = std::popcount(x3 & z3);
  const int swaps = std::popcount(p.z_mask() & q.x_mask());
  const int exponent = y1 + y2 - y3 + 2 * swaps;
  return {i_power(exponent), PauliWord(p.n_qubits(), x3, z3)};
}

bool words_commute(const PauliWord& p, const PauliWord& q) {
  if (p.n_qubits() != q.n_qubits()) {
    throw std::invalid_argument("words_commute: qubit counts differ");
  }
  const int parity = std::popcount(p.x_mask() & q.z_mask()) +
                     std::popcount(p.z_mask() & q.x_mask());
  return (parity & 1) == 0;
}

PauliSum::PauliSum(int n_qubits) : n_qubits_(n_qubits) {
  check_qubit_count(n_qubits);
}

PauliSum::PauliSum(int n_qubits, std::vector<PauliTerm> terms)
    : n_qubits_(n_qubits), terms_(std::move(terms)) {
  check_qubit_count(n_qubits);
  for (const auto& term : terms_) {
    if (term.word.n_qubits() != n_qubits_) {
      throw std::invalid_argument("PauliSum: term qubit count differs");
    }
    if (!std::isfinite(term.coefficient)) {
      throw std::invalid_argument("PauliSum: non-finite coefficient");
    }
  }
  canonicalize();
}

void PauliSum::add(double coefficient, const PauliWord& word) {
  if (word.n_qubits() != n_qubits_) {
    throw std::invalid_argument("PauliSum::add: qubit count differs");
  }
  if (!std::isfinite(coefficient)) {
    throw std::invalid_argument("PauliSum::add: non-finite coefficient");
  }
  terms_.push_back({coefficient, word});
  canonicalize();
}

void PauliSum::canonicalize() {
  std::stable_sort(terms_.begin(), terms_.end(),
                   [](const PauliTerm& a, const PauliTerm& b) {
                     return word_less(a.word, b.word);
                   });
  std::vector<PauliTerm> merged;
  merged.reserve(terms_.size());
  for (const auto& term : terms_) {
    if (!merged.empty() && merged.back().word == term.word) {
      merged.back().coefficient += term.coefficient;
    } else {
      merged.push_back(term);
    }
  }
  std::erase_if(merged, [](const PauliTerm& t) {
    return std::abs(t.coefficient) < kMergeDropThreshold;
  });
  terms_ = std::move(merged);
}

std::string PauliSum::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& term : terms_) {
    const double c = term.coefficient;
    if (first) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    const double mag = std::abs(c);
    if (mag != 1.0 || term.word.is_identity()) {
      out += detail::format_double(mag);
      out += " ";
    }
    if (!term.word.is_identity()) {
      out += term.word.to_string();
    } else {
      out += "I0";
    }
    first = false;
  }
  return out;
}

std::string to_string(SubspaceBasis::Label label) {
  switch (label) {
    case SubspaceBasis::Label::single_qubit: return "single_qubit";
    case SubspaceBasis::Label::two_local_nn: return "two_local_nn";
    case SubspaceBasis::Label::two_local_all: return "two_local_all";
    case SubspaceBasis::Label::full: return "full";
    case SubspaceBasis::Label::custom: return "custom";
  }
  throw std::invalid_argument("invalid basis label");
}

namespace {

void sort_basis(std::vector<PauliWord>& words) {
  std::sort(words.begin(), words.end(), word_less);
}

std::vector<PauliWord> single_qubit_words(int n_qubits) {
  std::vector<PauliWord> words;
  words.reserve(3 * static_cast<std::size_t>(n_qubits));
  for (int w = 0; w < n_qubits; ++w) {
    for (PauliLetter l : {PauliLetter::X, PauliLetter::Y, PauliLetter::Z}) {
      words.push_back(PauliWord::single(n_qubits, w, l));
    }
  }
  sort_basis(words);
  return words;
}

PauliWord pair_word(int n_qubits, int a, PauliLetter la, int b,
                    PauliLetter lb) {
  const PauliWord wa = PauliWord::single(n_qubits, a, la);
  const PauliWord wb = PauliWord::single(n_qubits, b, lb);
  return PauliWord(n_qubits, wa.x_mask() | wb.x_mask(),
                   wa.z_mask() | wb.z_mask());
}

}  // namespace

SubspaceBasis basis_single_qubit(int n_qubits) {
  check_qubit_count(n_qubits);
  return {n_qubits, single_qubit_words(n_qubits),
          SubspaceBasis::Label::single_qubit};
}

SubspaceBasis basis_two_local(int n_qubits, bool nearest_neighbor,
                              bool periodic, bool include_singles) {
  check_qubit_count(n_qubits);
  if (n_qubits < 2) {
    throw std::invalid_argument("two-local basis needs at least 2 qubits");
  }
  std::vector<std::pair<int, int>> pairs;
  if (nearest_neighbor) {
    for (int i = 0; i + 1 < n_qubits; ++i) pairs.emplace_back(i, i + 1);
    if (periodic && n_qubits > 2) pairs.emplace_back(0, n_qubits - 1);
  } else {
    for (int i = 0; i < n_qubits; ++i) {
      for (int j = i + 1; j < n_qubits; ++j) pairs.emplace_back(i, j);
    }
  }
  std::vector<PauliWord> words;
  words.reserve(9 * pairs.size());
  constexpr PauliLetter kLetters[] = {PauliLetter::X, PauliLetter::Y,
                                      PauliLetter::Z};
  for (const auto& [a, b] : pairs) {
    for (PauliLetter la : kLetters) {
      for (PauliLetter lb : kLetters) {
        words.push_back(pair_word(n_qubits, a, la, b, lb));
      }
    }
  }
  if (include_singles) {
    const auto singles = single_qubit_words(n_qubits);
    words.insert(words.end(), singles.begin(), singles.end());
  }
  sort_basis(words);
  const auto label = nearest_neighbor ? SubspaceBasis::Label::two_local_nn
                                      : SubspaceBasis::Label::two_local_all;
  return {n_qubits, std::move(words), label};
}

SubspaceBasis basis_full(int n_qubits) {
  check_qubit_count(n_qubits);
  if (n_qubits > 10) {
    throw std::invalid_argument("full basis enumeration guarded at 10 qubits");
  }
  std::vector<PauliWord> words;
  words.reserve((std::size_t{1} << (2 * n_qubits)) - 1);
  const std::uint64_t span = std::uint64_t{1} << n_qubits;
  for (std::uint64_t x = 0; x < span; ++x) {
    for (std::uint64_t z = 0; z < span; ++z) {
      if (x == 0 && z == 0) continue;
      words.emplace_back(n_qubits, x, z);
    }
  }
  sort_basis(words);
  return {n_qubits, std::move(words), SubspaceBasis::Label::full};
}

SubspaceBasis basis_custom(int n_qubits, std::vector<PauliWord> words) {
  check_qubit_count(n_qubits);
  for (const auto& word : words) {
    if (word.n_qubits() != n_qubits) {
      throw std::invalid_argument("basis_custom: word qubit count differs");
    }
    if (word.is_identity()) {
      throw std::invalid_argument("basis_custom: identity is not allowed");
    }
  }
  sort_basis(words);
  for (std::size_t i = 1; i < words.size(); ++i) {
    if (words[i] == words[i - 1]) {
      throw std::invalid_argument("basis_custom: duplicate word " +
                                  words[i].to_string());
    }
  }
  return {n_qubits, std::move(words), SubspaceBasis::Label::custom};
}

ParseError::ParseError(const std::string& message, std::size_t position)
    : std::runtime_error(message + " (at position " +
                         std::to_string(position) + ")"),
      position_(position) {}

namespace {

class SumParser {
 public:
  SumParser(std::string_view text, int n_qubits_override)
      : text_(text), override_(n_qubits_override) {}

  PauliSum parse() {
    skip_ws();
    if (at_end()) throw ParseError("empty Pauli-sum expression", pos_);
    double sign = 1.0;
    if (peek() == '+' || peek() == '-') {
      sign = peek() == '-' ? -1.0 : 1.0;
      ++pos_;
    }
    parse_term(sign);
    skip_ws();
    while (!at_end()) {
      const char op = peek();
      if (op != '+' && op != '-') {
        throw ParseError(std::string("expected '+' or '-', found '") + op +
                             "'",
                         pos_);
      }
      ++pos_;
      parse_term(op == '-' ? -1.0 : 1.0);
      skip_ws();
    }
    const int n = override_ > 0 ? override_ : max_wire_ + 1;
    PauliSum sum(n);
    for (const auto& [coeff, factors] : raw_terms_) {
      std::uint64_t x = 0;
      std::uint64_t z = 0;
      for (const auto& [wire, letter] : factors) {
        const PauliWord w = PauliWord::single(n, wire, letter);
        x |= w.x_mask();
        z |= w.z_mask();
      }
      sum.add(coeff, PauliWord(n, x, z));
    }
    return sum;
  }

 private:
  using Factors = std::vector<std::pair<int, PauliLetter>>;

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) {
      ++pos_;
    }
  }

  static bool is_letter_char(char c) {
    return c == 'I' || c == 'X' || c == 'Y' || c == 'Z';
  }

  void parse_term(double sign) {
    skip_ws();
    if (at_end()) throw ParseError("expected a term", pos_);
    double coeff = 1.0;
    if (!is_letter_char(peek())) {
      coeff = parse_number();
      skip_ws();
      if (!at_end() && peek() == '*') {
        ++pos_;
        skip_ws();
      }
    }
    Factors factors;
    skip_ws();
    if (at_end() || !is_letter_char(peek())) {
      throw ParseError("expected a Pauli factor (X/Y/Z followed by a wire)",
                       pos_);
    }
    while (!at_end() && is_letter_char(peek())) {
      parse_factor(factors);
      skip_ws();
    }
    raw_terms_.emplace_back(sign * coeff, std::move(factors));
  }

  void parse_factor(Factors& factors) {
    const char c = peek();
    ++pos_;
    PauliLetter letter;
    switch (c) {
      case 'I': letter = PauliLetter::I; break;
      case 'X': letter = PauliLetter::X; break;
      case 'Y': letter = PauliLetter::Y; break;
      case 'Z': letter = PauliLetter::Z; break;
      default: throw ParseError("invalid Pauli letter", pos_ - 1);
    }
    skip_ws();
    if (at_end() || !std::isdigit(static_cast<unsigned char>(peek()))) {
      throw ParseError("expected a nonnegative wire index", pos_);
    }
    const std::size_t start = pos_;
    long wire = 0;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) {
      wire = wire * 10 + (peek() - '0');
      if (wire >= kMaxWireBits) {
        throw ParseError("wire index too large", start);
      }
      ++pos_;
    }
    const int w = static_cast<int>(wire);
    if (override_ > 0 && w >= override_) {
      throw ParseError("wire index " + std::to_string(w) +
                           " exceeds the declared qubit count",
                       start);
    }
    auto& factors_ref = factors;
    for (const auto& [seen_wire, seen_letter] : factors_ref) {
      if (seen_wire == w) {
        throw ParseError("duplicate letter on wire " + std::to_string(w) +
                             " within one term",
                         start);
      }
    }
    max_wire_ = std::max(max_wire_, w);
    factors_ref.emplace_back(w, letter);
  }

  double parse_number() {
    const std::size_t start = pos_;
    while (!at_end() &&
           (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.' ||
            peek() == 'e' || peek() == 'E' ||
            ((peek() == '+' || peek() == '-') && pos_ > start &&
             (text_[pos_ - 1] == 'e' || text_[pos_ - 1] == 'E')))) {
      ++pos_;
    }
    if (pos_ == start) {
      throw ParseError("expected a coefficient or Pauli factor", start);
    }
    const std::string token(text_.substr(start, pos_ - start));
    std::size_t consumed = 0;
    double value = 0;
    try {
      value = std::stod(token, &consumed);
    } catch (const std::exception&) {
      throw ParseError("invalid coefficient '" + token + "'", start);
    }
    if (consumed != token.size()) {
      throw ParseError("invalid coefficient '" + token + "'", start);
    }
    return value;
  }

  std::string_view text_;
  int override_;
  std::size_t pos_ = 0;
  int max_wire_ = 0;
  std::vector<std::pair<double, Factors>> raw_terms_;
};

}  // namespace

PauliSum parse_pauli_sum(std::string_view text, int n_qubits_override) {
  return SumParser(text, n_qubits_override).parse();
}

}  // namespace riemflow
