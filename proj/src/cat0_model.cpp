#include "boundwalk/cat0_model.hpp"

#include <algorithm>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>

namespace boundwalk {

namespace {

void check_letters(std::span<const int> letters, std::size_t n, const char* what) {
  for (int l : letters)
    if (l == 0 || static_cast<std::size_t>(std::abs(l)) > n)
      throw std::domain_error(std::string(what) + ": letter " + std::to_string(l) + " outside 1.." +
                              std::to_string(n));
}

GroupWord twist(const GroupWord& g, int sign) {
  IntVec t = g.translation();
  for (int l : g.letters()) t[static_cast<std::size_t>(std::abs(l)) - 1] += l > 0 ? sign : -sign;
  return GroupWord(g.rank(), std::vector<int>(g.letters().begin(), g.letters().end()), std::move(t));
}

}  // namespace

bool is_reduced(std::span<const int> letters) {
  for (std::size_t i = 1; i < letters.size(); ++i)
    if (letters[i] == -letters[i - 1]) return false;
  return true;
}

std::vector<int> free_reduce(std::span<const int> letters) {
  std::vector<int> out;
  out.reserve(letters.size());
  for (int l : letters) {
    if (!out.empty() && out.back() == -l)
      out.pop_back();
    else
      out.push_back(l);
  }
  return out;
}

GroupWord::GroupWord(std::size_t n) : translation_(n, 0) {}

GroupWord::GroupWord(std::size_t n, std::vector<int> letters, IntVec translation)
    : letters_(free_reduce(letters)), translation_(std::move(translation)) {
  if (translation_.empty()) translation_.assign(n, 0);
  if (translation_.size() != n) throw std::invalid_argument("GroupWord: translation has the wrong length");
  check_letters(letters_, n, "GroupWord");
}

GroupWord GroupWord::inverse() const {
  std::vector<int> l(letters_.rbegin(), letters_.rend());
  for (int& x : l) x = -x;
  IntVec t = translation_;
  for (auto& x : t) x = -x;
  return GroupWord(rank(), std::move(l), std::move(t));
}

GroupWord operator*(const GroupWord& a, const GroupWord& b) {
  if (a.rank() != b.rank()) throw std::invalid_argument("GroupWord: rank mismatch");
  std::vector<int> l = a.letters_;
  l.insert(l.end(), b.letters_.begin(), b.letters_.end());
  IntVec t = a.translation_;
  for (std::size_t i = 0; i < t.size(); ++i) t[i] += b.translation_[i];
  return GroupWord(a.rank(), std::move(l), std::move(t));
}

GroupWord phi(const GroupWord& g) { return twist(g, 1); }
GroupWord phi_inverse(const GroupWord& g) { return twist(g, -1); }

std::vector<IntVec> walk_from_word(std::span<const int> letters, std::size_t n) {
  check_letters(letters, n, "walk_from_word");
  if (!is_reduced(letters)) throw std::domain_error("walk_from_word: word is not freely reduced");
  std::vector<IntVec> out;
  out.reserve(letters.size() + 1);
  IntVec x(n + 1, 0);
  out.push_back(x);
  for (int l : letters) {
    x[0] += 1;
    x[static_cast<std::size_t>(std::abs(l))] += l > 0 ? 1 : -1;
    out.push_back(x);
  }
  return out;
}

GroupWord word_from_indices(std::span<const int> indices, std::size_t n) {
  for (int i : indices)
    if (i <= 0) throw std::domain_error("word_from_indices: indices must be positive");
  return GroupWord(n, std::vector<int>(indices.begin(), indices.end()));
}

IntVec to_half_plane(const IntVec& x) {
  IntVec out(x.size() + 1);
  out[0] = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    out[0] += x[i];
    out[i + 1] = x[i];
  }
  return out;
}

WordWriter::WordWriter(std::ostream& out, std::size_t block) : out_(out), block_(block) {
  if (block_ == 0) throw std::invalid_argument("WordWriter: block size must be positive");
}

WordWriter::~WordWriter() { flush_block(); }

void WordWriter::put(int letter) {
  if (in_line_ == block_) flush_block();
  if (in_line_ > 0) out_ << ' ';
  out_ << letter;
  ++in_line_;
}

void WordWriter::flush_block() {
  if (in_line_ == 0) return;
  out_ << '\n';
  in_line_ = 0;
}

std::string format_word(std::span<const int> letters) {
  std::ostringstream s;
  for (std::size_t i = 0; i < letters.size(); ++i) s << (i ? " " : "") << letters[i];
  return s.str();
}

std::vector<int> parse_word(std::istream& in) {
  std::vector<int> out;
  std::string tok;
  while (in >> tok) {
    std::size_t used = 0;
    long v = 0;
    try {
      v = std::stol(tok, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("parse_word: not an integer: " + tok);
    }
    if (used != tok.size() || v == 0 || v > 1'000'000 || v < -1'000'000)
      throw std::invalid_argument("parse_word: bad letter: " + tok);
    out.push_back(static_cast<int>(v));
  }
  return out;
}

std::vector<int> parse_word(const std::string& text) {
  std::istringstream s(text);
  return parse_word(s);
}

}  // namespace boundwalk
