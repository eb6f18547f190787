#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace riemflow {

enum class PauliLetter : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char letter_to_char(PauliLetter letter);

/// An N-qubit tensor product of {I, X, Y, Z}, stored as two bitmasks:
/// bit w of x_mask is set when wire w carries X or Y, bit w of z_mask when it
/// carries Z or Y. The identity word has both masks zero.
class PauliWord {
 public:
  PauliWord(int n_qubits, std::uint64_t x_mask, std::uint64_t z_mask);

  static PauliWord identity(int n_qubits);
  static PauliWord single(int n_qubits, int wire, PauliLetter letter);

  int n_qubits() const { return n_qubits_; }
  std::uint64_t x_mask() const { return x_mask_; }
  std::uint64_t z_mask() const { return z_mask_; }

  PauliLetter letter(int wire) const;
  bool is_identity() const { return x_mask_ == 0 && z_mask_ == 0; }

  /// Number of non-identity tensor factors.
  int weight() const;

  /// Compact text form, e.g. "X0Z2"; the identity prints as "I".
  std::string to_string() const;

  friend bool operator==(const PauliWord&, const PauliWord&) = default;

 private:
  int n_qubits_;
  std::uint64_t x_mask_;
  std::uint64_t z_mask_;
};

/// Deterministic ordering: by weight, then by support wires, then by letter
/// (X < Y < Z) on each supported wire. Used for basis enumeration and for the
/// canonical term order of a PauliSum.
bool word_less(const PauliWord& a, const PauliWord& b);

struct WordProduct {
  std::complex<double> phase;  // one of {+1, +i, -1, -i}
  PauliWord word;
};

/// Matrix product P*Q under the standard Pauli matrices: P*Q = phase * word.
WordProduct word_multiply(const PauliWord& p, const PauliWord& q);

/// True iff PQ = QP; evaluated from the symplectic form of the bitmasks.
bool words_commute(const PauliWord& p, const PauliWord& q);

struct PauliTerm {
  double coefficient;
  PauliWord word;

  friend bool operator==(const PauliTerm&, const PauliTerm&) = default;
};

/// A real-weighted sum of PauliWords in canonical form: terms sorted by
/// word_less, duplicate words merged, coefficients with |c| < 1e-14 dropped.
class PauliSum {
 public:
  explicit PauliSum(int n_qubits);
  PauliSum(int n_qubits, std::vector<PauliTerm> terms);

  void add(double coefficient, const PauliWord& word);

  int n_qubits() const { return n_qubits_; }
  const std::vector<PauliTerm>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }

  /// Canonical text form that parse_pauli_sum maps back to this sum.
  std::string to_string() const;

  friend bool operator==(const PauliSum&, const PauliSum&) = default;

 private:
  void canonicalize();

  int n_qubits_;
  std::vector<PauliTerm> terms_;
};

/// An ordered set of distinct non-identity words spanning a subspace of the
/// Lie algebra su(2^N); ordering follows word_less.
struct SubspaceBasis {
  enum class Label { single_qubit, two_local_nn, two_local_all, full, custom };

  int n_qubits;
  std::vector<PauliWord> words;
  Label label;
};

std::string to_string(SubspaceBasis::Label label);

/// The 3N weight-1 words.
SubspaceBasis basis_single_qubit(int n_qubits);

/// Weight-2 words over wire pairs: nearest-neighbor chain/ring pairs or all
/// unordered pairs, 9 letter combinations each; optionally prepends the 3N
/// weight-1 words.
SubspaceBasis basis_two_local(int n_qubits, bool nearest_neighbor,
                              bool periodic, bool include_singles);

/// All 4^N - 1 non-identity words.
SubspaceBasis basis_full(int n_qubits);

SubspaceBasis basis_custom(int n_qubits, std::vector<PauliWord> words);

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t position);
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Parses the Pauli-sum grammar
///   sum   := ["+"|"-"] term (("+"|"-") term)*
///   term  := [coefficient ["*"]] factor+
///   factor:= letter wire
/// with letters X/Y/Z (I accepted and ignored), nonnegative wire indices and
/// insignificant whitespace. n_qubits is 1 + max wire index unless a positive
/// override is given. Throws ParseError with the offending position.
PauliSum parse_pauli_sum(std::string_view text, int n_qubits_override = 0);

}  // namespace riemflow
