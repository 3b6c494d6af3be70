#include "dhj/subspaces.hpp"

#include <algorithm>
#include <stdexcept>

namespace dhj {

SubspaceTemplate::SubspaceTemplate(int k_in, int d_in, std::vector<int> letters_in)
    : k(k_in), d(d_in), letters(std::move(letters_in)) {
  if (k < 2) throw std::invalid_argument("alphabet size must be at least 2");
  if (d < 1) throw std::invalid_argument("dimension must be positive");
  std::vector<bool> seen(static_cast<size_t>(d), false);
  for (int l : letters) {
    if (l < 1 || l > k + d) throw std::invalid_argument("template letter out of range");
    if (l > k) seen[static_cast<size_t>(l - k - 1)] = true;
  }
  for (bool s : seen)
    if (!s) throw std::invalid_argument("template misses a wildcard letter");
}

bool SubspaceTemplate::is_canonical() const {
  int next = k + 1;
  for (int l : letters) {
    if (l > k) {
      if (l > next) return false;
      if (l == next) ++next;
    }
  }
  return true;
}

SubspaceTemplate SubspaceTemplate::canonical() const {
  std::vector<int> relabel(static_cast<size_t>(d), 0);
  int next = k + 1;
  std::vector<int> out(letters.size());
  for (size_t i = 0; i < letters.size(); ++i) {
    int l = letters[i];
    if (l <= k) {
      out[i] = l;
    } else {
      int& target = relabel[static_cast<size_t>(l - k - 1)];
      if (target == 0) target = next++;
      out[i] = target;
    }
  }
  return SubspaceTemplate(k, d, std::move(out));
}

Word instantiate(const SubspaceTemplate& t, const Word& y) {
  if (y.n() != t.d) throw std::invalid_argument("instantiation arity mismatch");
  std::vector<int> out(t.letters.size());
  for (size_t i = 0; i < t.letters.size(); ++i) {
    int l = t.letters[i];
    out[i] = l <= t.k ? l : y.letters[static_cast<size_t>(l - t.k - 1)];
  }
  return Word(t.k, std::move(out));
}

SubspaceTemplate compose_template(const SubspaceTemplate& outer, const SubspaceTemplate& inner) {
  if (inner.n() != outer.d || inner.k != outer.k)
    throw std::invalid_argument("template composition mismatch");
  std::vector<int> out(outer.letters.size());
  for (size_t i = 0; i < outer.letters.size(); ++i) {
    int l = outer.letters[i];
    out[i] = l <= outer.k ? l : inner.letters[static_cast<size_t>(l - outer.k - 1)];
  }
  return SubspaceTemplate(outer.k, inner.d, std::move(out)).canonical();
}

WordSet subspace_points(const SubspaceTemplate& t) {
  std::uint64_t size = universe_size(t.n(), t.k);
  if (size > explicit_cap()) throw std::length_error("k^n exceeds the explicit-set cap");
  std::uint64_t points = universe_size(t.d, t.k);
  boost::dynamic_bitset<> bits(size);
  for (std::uint64_t yr = 0; yr < points; ++yr)
    bits.set(encode_rank(instantiate(t, decode_rank(t.d, t.k, yr))));
  return WordSet::from_bits(t.n(), t.k, std::move(bits));
}

BigInt subspace_count(int n, int k, int d) {
  BigInt total = 0;
  for (int j = 0; j <= d; ++j) {
    BigInt term = binomial(static_cast<unsigned long>(d), static_cast<unsigned long>(j)) *
                  int_pow(static_cast<unsigned long>(k + d - j), static_cast<unsigned long>(n));
    if (j % 2 == 0)
      total += term;
    else
      total -= term;
  }
  BigInt df = factorial(static_cast<unsigned long>(d));
  mpz_divexact(total.get_mpz_t(), total.get_mpz_t(), df.get_mpz_t());
  return total;
}

void for_each_subspace(int n, int k, int d,
                       const std::function<bool(const SubspaceTemplate&)>& fn) {
  if (d < 1 || d > n) throw std::invalid_argument("dimension out of range");
  std::vector<int> letters(static_cast<size_t>(n), 0);
  bool stop = false;
  // Letters in increasing order per position; a new wildcard may only be the
  // lowest unused one, which yields exactly the canonical templates.
  std::function<void(int, int)> rec = [&](int pos, int used) {
    if (stop) return;
    if (n - pos < d - used) return;  // not enough room for unseen wildcards
    if (pos == n) {
      if (used == d)
        if (!fn(SubspaceTemplate(k, d, letters))) stop = true;
      return;
    }
    for (int l = 1; l <= k + used && !stop; ++l) {
      letters[static_cast<size_t>(pos)] = l;
      rec(pos + 1, used);
    }
    if (used < d && !stop) {
      letters[static_cast<size_t>(pos)] = k + used + 1;
      rec(pos + 1, used + 1);
    }
  };
  rec(0, 0);
}

std::vector<SubspaceTemplate> enumerate_subspaces(int n, int k, int d) {
  std::vector<SubspaceTemplate> out;
  for_each_subspace(n, k, d, [&](const SubspaceTemplate& t) {
    out.push_back(t);
    return true;
  });
  return out;
}

Word compose(const Word& y, const Word& z) {
  int d = z.n();
  for (int l : y.letters)
    if (l > d) throw std::invalid_argument("composition: y letter exceeds arity of z");
  std::vector<int> out(y.letters.size());
  for (size_t i = 0; i < y.letters.size(); ++i)
    out[i] = z.letters[static_cast<size_t>(y.letters[i] - 1)];
  return Word(z.k, std::move(out));
}

bool covers_alphabet(const Word& y, int alphabet) {
  std::vector<bool> seen(static_cast<size_t>(alphabet), false);
  for (int l : y.letters)
    if (l <= alphabet) seen[static_cast<size_t>(l - 1)] = true;
  return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
}

SubspaceTemplate lift_composition_template(const Word& y, int k, int d) {
  for (int l : y.letters)
    if (l > d) throw std::invalid_argument("y letter exceeds the declared arity");
  if (!covers_alphabet(y, d))
    throw std::invalid_argument("degenerate y has no subspace interpretation");
  std::vector<int> letters(y.letters.size());
  for (size_t i = 0; i < y.letters.size(); ++i) letters[i] = y.letters[i] + k;
  return SubspaceTemplate(k, d, std::move(letters));
}

Subspace Subspace::from_template(const SubspaceTemplate& t) {
  Subspace s;
  s.tmpl = t;
  s.free_coords.assign(static_cast<size_t>(t.d), {});
  s.fixed_letters.assign(static_cast<size_t>(t.n()), 0);
  for (int i = 0; i < t.n(); ++i) {
    int l = t.letters[static_cast<size_t>(i)];
    if (l <= t.k)
      s.fixed_letters[static_cast<size_t>(i)] = l;
    else
      s.free_coords[static_cast<size_t>(l - t.k - 1)].push_back(i + 1);
  }
  return s;
}

Subspace Subspace::axis(int n, int k, const std::vector<int>& J, const Word& rest) {
  if (J.empty()) throw std::invalid_argument("axis subspace needs free coordinates");
  if (!std::is_sorted(J.begin(), J.end()) ||
      std::adjacent_find(J.begin(), J.end()) != J.end())
    throw std::invalid_argument("free coordinates must be strictly increasing");
  if (J.front() < 1 || J.back() > n) throw std::invalid_argument("free coordinate out of range");
  int m = static_cast<int>(J.size());
  if (rest.n() != n - m || rest.k != k) throw std::invalid_argument("fixed word mismatch");
  std::vector<int> letters(static_cast<size_t>(n), 0);
  size_t ji = 0, ri = 0;
  for (int pos = 1; pos <= n; ++pos) {
    if (ji < J.size() && J[ji] == pos)
      letters[static_cast<size_t>(pos - 1)] = k + 1 + static_cast<int>(ji++);
    else
      letters[static_cast<size_t>(pos - 1)] = rest.letters[ri++];
  }
  return from_template(SubspaceTemplate(k, m, std::move(letters)));
}

WordSet truncation(const Subspace& s) {
  int k = s.k(), d = s.d();
  std::uint64_t size = universe_size(s.n(), k);
  if (size > explicit_cap()) throw std::length_error("k^n exceeds the explicit-set cap");
  boost::dynamic_bitset<> bits(size);
  std::uint64_t points = 1;  // (k-1)^d, alphabet possibly of size 1
  for (int i = 0; i < d; ++i) points *= static_cast<std::uint64_t>(k - 1);
  for (std::uint64_t yr = 0; yr < points; ++yr) {
    std::vector<int> letters(static_cast<size_t>(d));
    std::uint64_t rest = yr;
    for (int i = 0; i < d; ++i) {
      letters[static_cast<size_t>(i)] = static_cast<int>(rest % static_cast<std::uint64_t>(k - 1)) + 1;
      rest /= static_cast<std::uint64_t>(k - 1);
    }
    bits.set(encode_rank(instantiate(s.tmpl, Word(k, std::move(letters)))));
  }
  return WordSet::from_bits(s.n(), k, std::move(bits));
}

WordSet pullback(const Subspace& s, const WordSet& A) {
  if (A.n() != s.n() || A.k() != s.k()) throw std::invalid_argument("universe mismatch");
  int k = s.k(), d = s.d();
  std::uint64_t points = universe_size(d, k);
  boost::dynamic_bitset<> bits(points);
  for (std::uint64_t yr = 0; yr < points; ++yr)
    if (A.contains(instantiate(s.tmpl, decode_rank(d, k, yr)))) bits.set(yr);
  return WordSet::from_bits(d, k, std::move(bits));
}

void for_each_axis_subspace(int n, int k, int m,
                            const std::function<void(const Subspace&)>& fn) {
  if (m < 1 || m > n) throw std::invalid_argument("dimension out of range");
  std::vector<int> J(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) J[static_cast<size_t>(i)] = i + 1;
  std::uint64_t rest_count = universe_size(n - m, k);
  while (true) {
    for (std::uint64_t yr = 0; yr < rest_count; ++yr)
      fn(Subspace::axis(n, k, J, decode_rank(n - m, k, yr)));
    // next m-combination of [n]
    int i = m - 1;
    while (i >= 0 && J[static_cast<size_t>(i)] == n - (m - 1 - i)) --i;
    if (i < 0) break;
    ++J[static_cast<size_t>(i)];
    for (int j = i + 1; j < m; ++j)
      J[static_cast<size_t>(j)] = J[static_cast<size_t>(j - 1)] + 1;
  }
}

std::string template_to_string(const SubspaceTemplate& t) {
  if (t.k + t.d > 9) {
    std::string out = "[";
    for (int i = 0; i < t.n(); ++i) {
      if (i) out += ",";
      out += std::to_string(t.letters[static_cast<size_t>(i)]);
    }
    return out + "]";
  }
  std::string out;
  for (int l : t.letters) out += static_cast<char>('0' + l);
  return out;
}

SubspaceTemplate template_from_string(int k, int d, const std::string& text) {
  if (k + d > 9) throw std::invalid_argument("digit-string form needs k+d <= 9");
  std::vector<int> letters;
  letters.reserve(text.size());
  for (char c : text) {
    if (c < '1' || c > '9') throw std::invalid_argument("bad template digit");
    letters.push_back(c - '0');
  }
  return SubspaceTemplate(k, d, std::move(letters));
}

}  // namespace dhj
