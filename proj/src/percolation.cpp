#include "lpptw/percolation.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "lpptw/errors.hpp"
#include "lpptw/kernels.hpp"

namespace lpptw {
namespace {

using kernels::Extremum;

constexpr double kInf = std::numeric_limits<double>::infinity();

bool is_max(PassageKind kind) {
  return kind == PassageKind::kL || kind == PassageKind::kLastPassage;
}
bool is_theorem_form(PassageKind kind) {
  return kind == PassageKind::kL || kind == PassageKind::kR;
}

// op(a, b) with the same tie semantics as the kernels.
double apply_op(bool maximize, double a, double b) {
  return maximize ? (a > b ? a : b) : (a < b ? a : b);
}

// Full-table DP with lexicographically smallest optimal partition. Only used
// when the caller asks for the partition; costs O(Nk) memory.
std::vector<std::size_t> recover_theorem_partition(const WeightMatrix& w,
                                                   bool maximize) {
  const std::size_t n = w.n_cols();
  const std::size_t k = w.n_rows();
  const double unreachable = maximize ? -kInf : kInf;
  const auto at = [k](std::size_t m, std::size_t j) { return m * (k + 1) + j; };
  std::vector<double> t((n + 1) * (k + 1), unreachable);
  t[at(0, 0)] = 0.0;
  for (std::size_t j = 1; j <= k; ++j) {
    t[at(0, j)] = 0.0;
    for (std::size_t m = 1; m <= n; ++m) {
      t[at(m, j)] =
          apply_op(maximize, t[at(m - 1, j)] + w(m - 1, j - 1), t[at(m, j - 1)]);
    }
  }
  const auto right_edge = [&](std::size_t m, std::size_t j) {
    // (m-1, j) -> (m, j) is an optimal move
    return m >= 1 && j >= 1 && t[at(m - 1, j)] + w(m - 1, j - 1) == t[at(m, j)];
  };
  const auto up_edge = [&](std::size_t m, std::size_t j) {
    // (m, j-1) -> (m, j) is an optimal move
    return j >= 1 && t[at(m, j - 1)] == t[at(m, j)];
  };

  std::vector<char> marked((n + 1) * (k + 1), 0);
  marked[at(n, k)] = 1;
  for (std::size_t j = k + 1; j-- > 0;) {
    for (std::size_t m = n + 1; m-- > 0;) {
      if (!marked[at(m, j)]) continue;
      if (right_edge(m, j)) marked[at(m - 1, j)] = 1;
      if (up_edge(m, j)) marked[at(m, j - 1)] = 1;
    }
  }

  std::vector<std::size_t> partition{0};
  std::size_t m = 0;
  std::size_t j = 1;
  while (j < k) {
    if (marked[at(m, j + 1)] && up_edge(m, j + 1)) {
      partition.push_back(m);
      ++j;
    } else {
      ++m;
    }
  }
  partition.push_back(n);
  return partition;
}

std::vector<std::size_t> recover_path_partition(const WeightMatrix& w,
                                                bool maximize) {
  const std::size_t n = w.n_cols();
  const std::size_t k = w.n_rows();
  const double unreachable = maximize ? -kInf : kInf;
  // g(i, j) for 1-based i, j.
  const auto at = [n](std::size_t i, std::size_t j) {
    return (j - 1) * n + (i - 1);
  };
  std::vector<double> g(n * k);
  const auto left_value = [&](std::size_t i, std::size_t j) {
    return i > 1 ? g[at(i - 1, j)] : unreachable;
  };
  const auto down_value = [&](std::size_t i, std::size_t j) {
    if (j > 1) return g[at(i, j - 1)];
    return i == 1 ? 0.0 : unreachable;
  };
  for (std::size_t j = 1; j <= k; ++j) {
    for (std::size_t i = 1; i <= n; ++i) {
      g[at(i, j)] = w(i - 1, j - 1) +
                    apply_op(maximize, left_value(i, j), down_value(i, j));
    }
  }
  const auto best = [&](std::size_t i, std::size_t j) {
    return apply_op(maximize, left_value(i, j), down_value(i, j));
  };
  const auto left_edge = [&](std::size_t i, std::size_t j) {
    return i > 1 && g[at(i - 1, j)] == best(i, j);
  };
  const auto down_edge = [&](std::size_t i, std::size_t j) {
    return j > 1 && g[at(i, j - 1)] == best(i, j);
  };

  std::vector<char> marked(n * k, 0);
  marked[at(n, k)] = 1;
  for (std::size_t j = k; j >= 1; --j) {
    for (std::size_t i = n; i >= 1; --i) {
      if (!marked[at(i, j)]) continue;
      if (left_edge(i, j)) marked[at(i - 1, j)] = 1;
      if (down_edge(i, j)) marked[at(i, j - 1)] = 1;
    }
  }

  std::vector<std::size_t> partition{1};
  std::size_t i = 1;
  std::size_t j = 1;
  while (j < k) {
    if (marked[at(i, j + 1)] && down_edge(i, j + 1)) {
      partition.push_back(i);
      ++j;
    } else {
      ++i;
    }
  }
  partition.push_back(n);
  return partition;
}

void validate_partition(const WeightMatrix& w, PassageKind kind,
                        std::span<const std::size_t> p) {
  const std::size_t k = w.n_rows();
  const std::size_t first = is_theorem_form(kind) ? 0 : 1;
  if (p.size() != k + 1 || p.front() != first || p.back() != w.n_cols()) {
    throw PreconditionError("partition must have k+1 breakpoints from " +
                            std::to_string(first) + " to N");
  }
  for (std::size_t j = 1; j < p.size(); ++j) {
    if (p[j] < p[j - 1]) {
      throw PreconditionError("partition breakpoints must be nondecreasing");
    }
  }
}

// Calls visit(partition) for every nondecreasing sequence
// lo = i_0 <= i_1 <= ... <= i_{k-1} <= i_k = n, in lexicographic order.
template <class Visit>
void enumerate_partitions(std::size_t lo, std::size_t n, std::size_t k,
                          Visit&& visit) {
  std::vector<std::size_t> p(k + 1, lo);
  p[k] = n;
  if (k == 1) {
    visit(p);
    return;
  }
  // Odometer over positions 1..k-1.
  for (;;) {
    visit(p);
    std::size_t pos = k - 1;
    while (pos >= 1 && p[pos] == n) --pos;
    if (pos == 0) return;
    const std::size_t v = p[pos] + 1;
    for (std::size_t q = pos; q < k; ++q) p[q] = v;
  }
}

void put_u32(std::ostream& out, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 4);
}
void put_u64(std::ostream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
  out.write(reinterpret_cast<const char*>(b), 8);
}
std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) throw IoError("truncated binary");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}
std::uint64_t get_u64(std::istream& in) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) throw IoError("truncated binary");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

double parse_double(const std::string& s) {
  std::istringstream is(s);
  is.imbue(std::locale::classic());
  double v;
  if (!(is >> v)) throw IoError("malformed number '" + s + "'");
  return v;
}

}  // namespace

WeightMatrix::WeightMatrix(std::size_t n_cols, std::size_t n_rows,
                           std::vector<double> values, Provenance provenance)
    : n_cols_(n_cols),
      n_rows_(n_rows),
      values_(std::move(values)),
      provenance_(std::move(provenance)) {
  if (n_cols_ == 0 || n_rows_ == 0) {
    throw DimensionError("weight matrix needs N >= 1 and k >= 1");
  }
  if (values_.size() != n_cols_ * n_rows_) {
    throw DimensionError("weight matrix has " + std::to_string(values_.size()) +
                         " values, expected N*k = " +
                         std::to_string(n_cols_ * n_rows_));
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw ParameterError("weights must be finite");
  }
}

WeightMatrix WeightMatrix::sample(const WeightDistribution& dist,
                                  std::size_t n_cols, std::size_t n_rows,
                                  std::uint64_t seed, std::uint64_t stream_id) {
  if (n_cols == 0 || n_rows == 0) {
    throw DimensionError("weight matrix needs N >= 1 and k >= 1");
  }
  RngStream stream(seed, stream_id);
  std::vector<double> values(n_cols * n_rows);
  dist.sample_into(stream, values);
  return WeightMatrix(n_cols, n_rows, std::move(values),
                      Provenance{dist.descriptor(), seed, stream_id});
}

WeightMatrix WeightMatrix::negated() const {
  std::vector<double> v(values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = -values_[i];
  return WeightMatrix(n_cols_, n_rows_, std::move(v), provenance_);
}

WeightMatrix WeightMatrix::transposed() const {
  std::vector<double> v(values_.size());
  for (std::size_t j = 0; j < n_rows_; ++j) {
    for (std::size_t i = 0; i < n_cols_; ++i) {
      v[i * n_rows_ + j] = values_[j * n_cols_ + i];
    }
  }
  return WeightMatrix(n_rows_, n_cols_, std::move(v), provenance_);
}

std::string to_string(PassageKind kind) {
  switch (kind) {
    case PassageKind::kL:
      return "L";
    case PassageKind::kR:
      return "R";
    case PassageKind::kLastPassage:
      return "L_last";
    case PassageKind::kFirstPassage:
      return "L_first";
  }
  return "?";
}

PassageKind passage_kind_from_string(const std::string& name) {
  if (name == "L") return PassageKind::kL;
  if (name == "R") return PassageKind::kR;
  if (name == "L_last") return PassageKind::kLastPassage;
  if (name == "L_first") return PassageKind::kFirstPassage;
  throw ParameterError("unknown passage kind '" + name +
                       "' (expected L, R, L_last or L_first)");
}

PassageResult passage(const WeightMatrix& w, PassageKind kind,
                      bool recover_partition) {
  const auto& k = kernels::active();
  const Extremum op = is_max(kind) ? Extremum::kMax : Extremum::kMin;
  PassageResult result;
  result.kind = kind;
  if (is_theorem_form(kind)) {
    result.value = k.theorem_form(w.values(), w.n_cols(), w.n_rows(), op);
    if (recover_partition) {
      result.optimal_partition = recover_theorem_partition(w, is_max(kind));
    }
  } else {
    result.value = k.path_form(w.values(), w.n_cols(), w.n_rows(), op);
    if (recover_partition) {
      result.optimal_partition = recover_path_partition(w, is_max(kind));
    }
  }
  return result;
}

PassageResult last_passage_theorem_form(const WeightMatrix& w,
                                        bool recover_partition) {
  return passage(w, PassageKind::kL, recover_partition);
}
PassageResult first_passage_theorem_form(const WeightMatrix& w,
                                         bool recover_partition) {
  return passage(w, PassageKind::kR, recover_partition);
}
PassageResult last_passage_path_form(const WeightMatrix& w,
                                     bool recover_partition) {
  return passage(w, PassageKind::kLastPassage, recover_partition);
}
PassageResult first_passage_path_form(const WeightMatrix& w,
                                      bool recover_partition) {
  return passage(w, PassageKind::kFirstPassage, recover_partition);
}

double evaluate_partition(const WeightMatrix& w, PassageKind kind,
                          std::span<const std::size_t> p) {
  validate_partition(w, kind, p);
  double acc = 0.0;
  const bool theorem = is_theorem_form(kind);
  for (std::size_t j = 0; j + 1 < p.size(); ++j) {
    const std::size_t begin = theorem ? p[j] + 1 : p[j];
    for (std::size_t col = begin; col <= p[j + 1]; ++col) acc += w(col - 1, j);
  }
  return acc;
}

PassageResult brute_force_oracle(const WeightMatrix& w, PassageKind kind) {
  if (w.n_cols() > kOracleMaxCols || w.n_rows() > kOracleMaxRows) {
    throw OracleScopeError("brute-force oracle limited to N <= " +
                           std::to_string(kOracleMaxCols) + ", k <= " +
                           std::to_string(kOracleMaxRows));
  }
  const bool maximize = is_max(kind);
  const std::size_t lo = is_theorem_form(kind) ? 0 : 1;
  PassageResult best;
  best.kind = kind;
  best.value = maximize ? -kInf : kInf;
  enumerate_partitions(lo, w.n_cols(), w.n_rows(),
                       [&](const std::vector<std::size_t>& p) {
                         const double v = evaluate_partition(w, kind, p);
                         if (maximize ? v > best.value : v < best.value) {
                           best.value = v;
                           best.optimal_partition = p;
                         }
                       });
  return best;
}

SelectionBounds corner_selection_bounds(const WeightMatrix& w) {
  const std::size_t n = w.n_cols();
  const std::size_t k = w.n_rows();
  if (k == 1) return {0.0, 0.0};
  // best_*[i]: optimum of the selection sum ending with i_j = i (0-based).
  std::vector<double> best_max(n), best_min(n);
  for (std::size_t i = 0; i < n; ++i) best_max[i] = best_min[i] = w(i, 1);
  for (std::size_t j = 2; j < k; ++j) {
    double run_max = -kInf;
    double run_min = kInf;
    for (std::size_t i = 0; i < n; ++i) {
      run_max = std::max(run_max, best_max[i]);
      run_min = std::min(run_min, best_min[i]);
      best_max[i] = w(i, j) + run_max;
      best_min[i] = w(i, j) + run_min;
    }
  }
  SelectionBounds b{kInf, -kInf};
  for (std::size_t i = 0; i < n; ++i) {
    b.max = std::max(b.max, best_max[i]);
    b.min = std::min(b.min, best_min[i]);
  }
  return b;
}

void write_csv(std::ostream& out, const WeightMatrix& w) {
  const auto& prov = w.provenance();
  std::string desc = prov.distribution;
  std::string quoted = "\"";
  for (char c : desc) quoted += c == '"' ? std::string("\"\"") : std::string(1, c);
  quoted += '"';
  out << "N,k,distribution,seed,stream_id\n";
  out << w.n_cols() << ',' << w.n_rows() << ',' << quoted << ',' << prov.seed
      << ',' << prov.stream_id << '\n';
  char buf[40];
  for (std::size_t j = 0; j < w.n_rows(); ++j) {
    for (std::size_t i = 0; i < w.n_cols(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", w(i, j));
      if (i > 0) out << ',';
      out << buf;
    }
    out << '\n';
  }
}

WeightMatrix read_weight_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) ||
      split_csv_line(line) != std::vector<std::string>{"N", "k", "distribution",
                                                       "seed", "stream_id"}) {
    throw IoError("weight CSV: missing header");
  }
  if (!std::getline(in, line)) throw IoError("weight CSV: missing metadata");
  const auto meta = split_csv_line(line);
  if (meta.size() != 5) throw IoError("weight CSV: malformed metadata line");
  const std::size_t n = std::stoull(meta[0]);
  const std::size_t k = std::stoull(meta[1]);
  Provenance prov{meta[2], std::stoull(meta[3]), std::stoull(meta[4])};
  std::vector<double> values;
  values.reserve(n * k);
  for (std::size_t j = 0; j < k; ++j) {
    if (!std::getline(in, line)) throw IoError("weight CSV: missing row");
    const auto fields = split_csv_line(line);
    if (fields.size() != n) throw IoError("weight CSV: row has wrong length");
    for (const auto& f : fields) values.push_back(parse_double(f));
  }
  return WeightMatrix(n, k, std::move(values), std::move(prov));
}

void write_binary(std::ostream& out, const WeightMatrix& w) {
  out.write("LPPW", 4);
  put_u32(out, 1);
  put_u64(out, w.n_cols());
  put_u64(out, w.n_rows());
  put_u64(out, w.provenance().seed);
  put_u64(out, w.provenance().stream_id);
  const auto& desc = w.provenance().distribution;
  put_u32(out, static_cast<std::uint32_t>(desc.size()));
  out.write(desc.data(), static_cast<std::streamsize>(desc.size()));
  for (double v : w.values()) put_u64(out, std::bit_cast<std::uint64_t>(v));
}

WeightMatrix read_weight_binary(std::istream& in) {
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, "LPPW", 4) != 0) {
    throw IoError("weight binary: bad magic");
  }
  const std::uint32_t version = get_u32(in);
  if (version != 1) {
    throw IoError("weight binary: unsupported version " +
                  std::to_string(version));
  }
  const std::size_t n = get_u64(in);
  const std::size_t k = get_u64(in);
  Provenance prov;
  prov.seed = get_u64(in);
  prov.stream_id = get_u64(in);
  prov.distribution.resize(get_u32(in));
  if (!in.read(prov.distribution.data(),
               static_cast<std::streamsize>(prov.distribution.size()))) {
    throw IoError("truncated binary");
  }
  std::vector<double> values(n * k);
  for (double& v : values) v = std::bit_cast<double>(get_u64(in));
  return WeightMatrix(n, k, std::move(values), std::move(prov));
}

}  // namespace lpptw
