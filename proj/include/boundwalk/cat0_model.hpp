#pragma once

// Coordinates for G = F_n x Z^n acting on the tree-times-flat space: group
// words, the twisting automorphism, the maps f_i on a single flat, and the
// correspondence between tree geodesics and walks in the half-plane.
//
// Flat and half-plane points are (n+1)-vectors; coordinate 0 is the e_0
// (tree) direction and coordinate i is e_i.

#include "boundwalk/walk_synthesis.hpp"

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace boundwalk {

/// Element of F_n x Z^n. Letters are signed generator indices (+i is g_i,
/// -i its inverse) and are freely reduced on construction.
class GroupWord {
public:
  explicit GroupWord(std::size_t n);
  GroupWord(std::size_t n, std::vector<int> letters, IntVec translation = {});

  std::size_t rank() const { return translation_.size(); }
  std::span<const int> letters() const { return letters_; }
  const IntVec& translation() const { return translation_; }

  GroupWord inverse() const;

  friend GroupWord operator*(const GroupWord& a, const GroupWord& b);
  friend bool operator==(const GroupWord& a, const GroupWord& b) = default;

private:
  std::vector<int> letters_;
  IntVec translation_;
};

bool is_reduced(std::span<const int> letters);
std::vector<int> free_reduce(std::span<const int> letters);

/// (g_i, 0) -> (g_i, e_i), fixing the Z^n factor.
GroupWord phi(const GroupWord& g);
GroupWord phi_inverse(const GroupWord& g);

/// f_i on the flat E_i: fixes e_1..e_n and sends e_0 to e_0 + e_i, i.e. adds
/// coordinate 0 to coordinate i. `i` is 1-based.
template <class T>
std::vector<T> f_on_flat(std::size_t i, std::span<const T> p) {
  if (p.size() < 2) throw std::invalid_argument("f_on_flat: point needs n + 1 coordinates");
  if (i == 0 || i >= p.size()) throw std::out_of_range("f_on_flat: generator index out of range");
  std::vector<T> out(p.begin(), p.end());
  out[i] += out[0];
  return out;
}

/// Positions of the half-plane walk of a reduced word: +i steps by e_0 + e_i
/// and -i by e_0 - e_i, starting at the origin. Throws std::domain_error if
/// the word is not freely reduced or uses an index outside 1..n.
std::vector<IntVec> walk_from_word(std::span<const int> letters, std::size_t n);

/// The positive word g_{I_1} g_{I_2} ... of a walk's index sequence.
GroupWord word_from_indices(std::span<const int> indices, std::size_t n);

/// A walk over e_1..e_n seen in the half-plane: e_0 coordinate equal to the
/// coordinate sum, followed by the position.
IntVec to_half_plane(const IntVec& x);

/// Writes a word as lines of space-separated signed integers, at most
/// `block` letters per line. `flush_block` ends the current line early so a
/// line never spans two phases.
class WordWriter {
public:
  explicit WordWriter(std::ostream& out, std::size_t block = 1000);
  ~WordWriter();
  WordWriter(const WordWriter&) = delete;
  WordWriter& operator=(const WordWriter&) = delete;

  void put(int letter);
  void flush_block();

private:
  std::ostream& out_;
  std::size_t block_;
  std::size_t in_line_ = 0;
};

std::string format_word(std::span<const int> letters);

/// Reads whitespace-separated nonzero integers; throws std::invalid_argument
/// on anything else.
std::vector<int> parse_word(std::istream& in);
std::vector<int> parse_word(const std::string& text);

}  // namespace boundwalk
