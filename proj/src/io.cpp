#include "sislab/io.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "sislab/error.hpp"

namespace sislab::io {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

constexpr char kSeqMagic[8] = {'S', 'I', 'S', 'W', 'S', 'E', 'Q', '1'};
constexpr char kGridMagic[8] = {'S', 'I', 'S', 'G', 'R', 'I', 'D', '1'};
constexpr char kFieldMagic[8] = {'S', 'I', 'S', 'F', 'I', 'B', 'R', '1'};
constexpr char kRangeMagic[8] = {'S', 'I', 'S', 'R', 'O', 'P', 'F', '1'};

template <class T>
void put(std::ostream& out, T v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& in, const fs::path& path) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!in) throw ParseError("truncated file " + path.string(), 0);
  return v;
}

void put_complex(std::ostream& out, Complex c) {
  put(out, c.real());
  put(out, c.imag());
}

Complex get_complex(std::istream& in, const fs::path& path) {
  const double re = get<double>(in, path);
  return {re, get<double>(in, path)};
}

std::ifstream open_checked(const fs::path& path, const char (&magic)[8]) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  char buf[8];
  in.read(buf, 8);
  if (!in || std::memcmp(buf, magic, 8) != 0)
    throw ParseError(path.string() + ": bad magic, expected " + std::string(magic, 8), 0);
  return in;
}

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_field_to(std::ostream& out, const FiberField& f) {
  out.write(kFieldMagic, 8);
  put<std::uint32_t>(out, static_cast<std::uint32_t>(f.grid().n()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(f.grid().M()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(f.window().K()));
  put<double>(out, f.weight().s());
  put<double>(out, f.grid().offset());
  put<double>(out, f.tail());
  put<std::uint32_t>(out, static_cast<std::uint32_t>(f.label().size()));
  out.write(f.label().data(), static_cast<std::streamsize>(f.label().size()));
  for (std::size_t j = 0; j < f.grid().size(); ++j)
    for (std::size_t pos = 0; pos < f.window().size(); ++pos) put_complex(out, f.component(j, pos));
}

}  // namespace

void atomic_write(const fs::path& path, const std::function<void(std::ostream&)>& writer) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    writer(out);
    out.flush();
    if (!out) {
      out.close();
      fs::remove(tmp);
      throw Error("write failed: " + tmp.string());
    }
  }
  fs::rename(tmp, path);
}

void atomic_write_text(const fs::path& path, const std::string& text) {
  atomic_write(path, [&](std::ostream& out) { out << text; });
}

void write_sequence(const fs::path& path, const WeightedSeq& seq) {
  atomic_write(path, [&](std::ostream& out) {
    out.write(kSeqMagic, 8);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(seq.window().n()));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(seq.window().K()));
    put<double>(out, seq.weight().s());
    put<std::uint64_t>(out, seq.window().size());
    for (const auto& c : seq.coefficients()) put_complex(out, c);
  });
}

WeightedSeq read_sequence(const fs::path& path) {
  auto in = open_checked(path, kSeqMagic);
  const auto n = static_cast<int>(get<std::uint32_t>(in, path));
  const auto K = static_cast<int>(get<std::uint32_t>(in, path));
  const double s = get<double>(in, path);
  const auto count = get<std::uint64_t>(in, path);
  FreqWindow win(n, K);
  if (count != win.size()) throw ParseError(path.string() + ": count does not match window", 0);
  std::vector<Complex> c(count);
  for (auto& x : c) x = get_complex(in, path);
  return WeightedSeq(std::move(win), Weight(s, n), std::move(c));
}

void write_sequence_csv(const fs::path& path, const WeightedSeq& seq) {
  std::ostringstream out;
  const int n = seq.window().n();
  for (int d = 0; d < n; ++d) out << "k" << d + 1 << ',';
  out << "re,im\n";
  for (std::size_t pos = 0; pos < seq.window().size(); ++pos) {
    for (int k : seq.window().index(pos)) out << k << ',';
    out << fmt17(seq[pos].real()) << ',' << fmt17(seq[pos].imag()) << '\n';
  }
  atomic_write_text(path, out.str());
}

void write_grid(const fs::path& path, const TorusGrid& grid) {
  atomic_write(path, [&](std::ostream& out) {
    out.write(kGridMagic, 8);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(grid.n()));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(grid.M()));
    put<double>(out, grid.offset());
    put<std::uint64_t>(out, grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j)
      for (double t : grid.point(j)) put(out, t);
  });
}

TorusGrid read_grid(const fs::path& path) {
  auto in = open_checked(path, kGridMagic);
  const auto n = static_cast<int>(get<std::uint32_t>(in, path));
  const auto M = static_cast<int>(get<std::uint32_t>(in, path));
  const double offset = get<double>(in, path);
  const auto count = get<std::uint64_t>(in, path);
  TorusGrid grid(n, M, offset);
  if (count != grid.size()) throw ParseError(path.string() + ": point count mismatch", 0);
  return grid;
}

void write_field(const fs::path& path, const FiberField& field) {
  atomic_write(path, [&](std::ostream& out) { write_field_to(out, field); });
}

FiberField read_field(const fs::path& path) {
  auto in = open_checked(path, kFieldMagic);
  const auto n = static_cast<int>(get<std::uint32_t>(in, path));
  const auto M = static_cast<int>(get<std::uint32_t>(in, path));
  const auto K = static_cast<int>(get<std::uint32_t>(in, path));
  const double s = get<double>(in, path);
  const double offset = get<double>(in, path);
  const double tail = get<double>(in, path);
  std::string label(get<std::uint32_t>(in, path), '\0');
  in.read(label.data(), static_cast<std::streamsize>(label.size()));
  TorusGrid grid(n, M, offset);
  FreqWindow win(n, K);
  const Weight w(s, n);
  const auto mu = window_weights(w, win);
  Eigen::MatrixXcd data(static_cast<Eigen::Index>(win.size()),
                        static_cast<Eigen::Index>(grid.size()));
  for (Eigen::Index j = 0; j < data.cols(); ++j)
    for (Eigen::Index pos = 0; pos < data.rows(); ++pos)
      data(pos, j) = get_complex(in, path) * mu[static_cast<std::size_t>(pos)];
  return FiberField(std::move(grid), std::move(win), w, std::move(data), tail, std::move(label));
}

void write_field_csv(const fs::path& path, const FiberField& field) {
  std::ostringstream out;
  const int n = field.grid().n();
  for (int d = 0; d < n; ++d) out << "t" << d + 1 << ',';
  for (int d = 0; d < n; ++d) out << "k" << d + 1 << ',';
  out << "re,im\n";
  for (std::size_t j = 0; j < field.grid().size(); ++j)
    for (std::size_t pos = 0; pos < field.window().size(); ++pos) {
      for (double t : field.grid().point(j)) out << fmt17(t) << ',';
      for (int k : field.window().index(pos)) out << k << ',';
      const Complex c = field.component(j, pos);
      out << fmt17(c.real()) << ',' << fmt17(c.imag()) << '\n';
    }
  atomic_write_text(path, out.str());
}

void write_decomposition(const fs::path& dir, const std::string& stem,
                         const DecompositionResult& result) {
  json manifest;
  manifest["format"] = "sislab-decomposition-1";
  manifest["grid_points"] = result.grid_size();
  json slots = json::array();
  for (std::size_t i = 0; i < result.slots.size(); ++i) {
    const std::string file = stem + "_psi" + std::to_string(i + 1) + ".fib";
    write_field(dir / file, result.slots[i]);
    std::size_t hits = 0;
    for (char c : result.spectra[i]) hits += c ? 1 : 0;
    slots.push_back({{"slot", i + 1},
                     {"file", file},
                     {"label", result.slots[i].label()},
                     {"spectrum_measure", static_cast<double>(hits) /
                                              static_cast<double>(result.grid_size())}});
  }
  manifest["slots"] = slots;
  std::vector<std::size_t> histogram(result.slots.size() + 1, 0);
  for (int d : result.rank) ++histogram[static_cast<std::size_t>(d)];
  manifest["rank_histogram"] = histogram;
  atomic_write_text(dir / (stem + ".json"), manifest.dump(2) + "\n");
}

void write_range_operator(const fs::path& path, const RangeOperatorField& R) {
  std::size_t rows = 0;
  std::size_t cols = 0;
  for (std::size_t j = 0; j < R.size(); ++j) {
    rows = std::max(rows, static_cast<std::size_t>(R.at(j).rows()));
    cols = std::max(cols, static_cast<std::size_t>(R.at(j).cols()));
  }
  atomic_write(path, [&](std::ostream& out) {
    out.write(kRangeMagic, 8);
    put<std::uint64_t>(out, R.size());
    put<std::uint32_t>(out, static_cast<std::uint32_t>(rows));
    put<std::uint32_t>(out, static_cast<std::uint32_t>(cols));
    for (std::size_t j = 0; j < R.size(); ++j) put<std::uint32_t>(out, static_cast<std::uint32_t>(R.at(j).cols()));
    for (std::size_t j = 0; j < R.size(); ++j) put<std::uint32_t>(out, static_cast<std::uint32_t>(R.at(j).rows()));
    for (std::size_t j = 0; j < R.size(); ++j) {
      const auto& m = R.at(j);
      for (std::size_t c = 0; c < cols; ++c)
        for (std::size_t r = 0; r < rows; ++r) {
          const bool inside = static_cast<Eigen::Index>(r) < m.rows() &&
                              static_cast<Eigen::Index>(c) < m.cols();
          put_complex(out, inside ? m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c))
                                  : Complex(0.0));
        }
    }
  });
  json manifest;
  manifest["format"] = "sislab-range-operator-1";
  manifest["binary"] = path.filename().string();
  manifest["grid_points"] = R.size();
  manifest["padded_rows"] = rows;
  manifest["padded_cols"] = cols;
  manifest["square"] = R.square();
  manifest["sup_norm"] = R.sup_norm();
  fs::path mpath = path;
  mpath += ".json";
  atomic_write_text(mpath, manifest.dump(2) + "\n");
}

RangeOperatorData read_range_operator(const fs::path& path) {
  auto in = open_checked(path, kRangeMagic);
  const auto count = get<std::uint64_t>(in, path);
  const auto rows = get<std::uint32_t>(in, path);
  const auto cols = get<std::uint32_t>(in, path);
  RangeOperatorData out;
  out.domain_rank.resize(count);
  out.codomain_rank.resize(count);
  for (auto& d : out.domain_rank) d = static_cast<int>(get<std::uint32_t>(in, path));
  for (auto& d : out.codomain_rank) d = static_cast<int>(get<std::uint32_t>(in, path));
  out.matrices.resize(count);
  for (std::size_t j = 0; j < count; ++j) {
    Eigen::MatrixXcd padded(rows, cols);
    for (Eigen::Index c = 0; c < padded.cols(); ++c)
      for (Eigen::Index r = 0; r < padded.rows(); ++r) padded(r, c) = get_complex(in, path);
    out.matrices[j] = padded.topLeftCorner(out.codomain_rank[j], out.domain_rank[j]);
  }
  return out;
}

void write_dual_system(const fs::path& dir, const std::string& stem, const DualSystem& dual) {
  json manifest;
  manifest["format"] = "sislab-dual-1";
  json files = json::array();
  for (std::size_t i = 0; i < dual.duals.size(); ++i) {
    const std::string file = stem + "_dual" + std::to_string(i + 1) + ".fib";
    write_field(dir / file, dual.duals[i]);
    files.push_back({{"file", file}, {"label", dual.duals[i].label()}});
  }
  manifest["duals"] = files;
  manifest["bounds"] = {{"A", dual.primal_report.frame_lower},
                        {"B", dual.primal_report.frame_upper},
                        {"A_dual", dual.dual_report.frame_lower},
                        {"B_dual", dual.dual_report.frame_upper}};
  atomic_write_text(dir / (stem + ".json"), manifest.dump(2) + "\n");
}

}  // namespace sislab::io
