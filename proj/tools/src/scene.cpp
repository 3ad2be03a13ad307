#include "lhvlab_cli/scene.hpp"

#include <algorithm>
#include <fstream>
#include <iterator>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "lhvlab/bell.hpp"
#include "lhvlab/errors.hpp"
#include "lhvlab/steering.hpp"

namespace lhvlab::cli {

using nlohmann::json;

const char* task_name(Task t) {
  switch (t) {
    case Task::Bell: return "bell";
    case Task::SteerAB: return "steer-ab";
    case Task::SteerBA: return "steer-ba";
    case Task::Criterion: return "criterion";
    case Task::ConstructMeasurements: return "construct-measurements";
  }
  return "?";
}

SolverParams SolverParams::defaults() {
  return {kDistTol, kGapTol, kFeasTol, kMaxIters, 1, 0};
}

void apply_overrides(SolverParams& params, const ParamOverrides& o) {
  if (o.dist_tol) params.dist_tol = *o.dist_tol;
  if (o.gap_tol) params.gap_tol = *o.gap_tol;
  if (o.feas_tol) params.feas_tol = *o.feas_tol;
  if (o.max_iters) params.max_iters = *o.max_iters;
  if (o.threads) params.threads = *o.threads;
  if (o.seed) params.seed = *o.seed;
}

SceneError::SceneError(const std::string& source, std::size_t line, const std::string& pointer,
                       const std::string& message)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " +
                         (pointer.empty() ? std::string("(root)") : pointer) + ": " + message),
      line_(line),
      pointer_(pointer) {}

namespace {

// --- line index --------------------------------------------------------
//
// nlohmann's DOM does not keep source positions, so a SAX pass over the
// same text records the line on which every value starts, keyed by JSON
// pointer. The input iterator publishes how far the lexer has read.

class TrackingIterator {
 public:
  using iterator_category = std::input_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;

  TrackingIterator(const char* p, const char** mark) : p_(p), mark_(mark) {}
  reference operator*() const { return *p_; }
  TrackingIterator& operator++() {
    *mark_ = ++p_;
    return *this;
  }
  TrackingIterator operator++(int) {
    auto old = *this;
    ++*this;
    return old;
  }
  bool operator==(const TrackingIterator& o) const { return p_ == o.p_; }
  bool operator!=(const TrackingIterator& o) const { return p_ != o.p_; }

 private:
  const char* p_;
  const char** mark_;
};

std::string escape_token(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '~') out += "~0";
    else if (c == '/') out += "~1";
    else out += c;
  }
  return out;
}

class LineIndex {
 public:
  explicit LineIndex(const std::string& text) : text_(text) {
    for (std::size_t i = 0; i < text.size(); ++i)
      if (text[i] == '\n') newlines_.push_back(i);
  }

  // 1-based line of the byte at `offset`.
  std::size_t line_of(std::size_t offset) const {
    return static_cast<std::size_t>(
               std::lower_bound(newlines_.begin(), newlines_.end(), offset) - newlines_.begin()) +
           1;
  }

  // Line of the last token the lexer has finished, ignoring trailing blanks
  // it may have read ahead.
  std::size_t line_before(std::size_t consumed) const {
    std::size_t i = std::min(consumed, text_.size());
    while (i > 0 && std::isspace(static_cast<unsigned char>(text_[i - 1]))) --i;
    return line_of(i == 0 ? 0 : i - 1);
  }

  std::size_t line(const std::string& pointer) const {
    std::string p = pointer;
    while (true) {
      if (auto it = lines_.find(p); it != lines_.end()) return it->second;
      if (p.empty()) return 1;
      p.erase(p.rfind('/'));
    }
  }

  void record(const std::string& pointer, std::size_t line) { lines_.emplace(pointer, line); }

 private:
  const std::string& text_;
  std::vector<std::size_t> newlines_;
  std::map<std::string, std::size_t> lines_;
};

class LineRecorder : public nlohmann::json_sax<json> {
 public:
  LineRecorder(LineIndex& index, const char* begin, const char* const* mark)
      : index_(index), begin_(begin), mark_(mark) {}

  bool null() override { return scalar(); }
  bool boolean(bool) override { return scalar(); }
  bool number_integer(number_integer_t) override { return scalar(); }
  bool number_unsigned(number_unsigned_t) override { return scalar(); }
  bool number_float(number_float_t, const string_t&) override { return scalar(); }
  bool string(string_t&) override { return scalar(); }
  bool binary(binary_t&) override { return scalar(); }

  bool start_object(std::size_t) override {
    enter();
    frames_.push_back({false, 0, {}});
    return true;
  }
  bool key(string_t& k) override {
    frames_.back().key = k;
    return true;
  }
  bool end_object() override {
    frames_.pop_back();
    return true;
  }
  bool start_array(std::size_t) override {
    enter();
    frames_.push_back({true, 0, {}});
    return true;
  }
  bool end_array() override {
    frames_.pop_back();
    return true;
  }

  bool parse_error(std::size_t position, const std::string&,
                   const nlohmann::detail::exception& ex) override {
    error_position = position;
    error_message = ex.what();
    return false;
  }

  std::size_t error_position = 0;
  std::string error_message;

 private:
  struct Frame {
    bool is_array;
    std::size_t index;
    std::string key;
  };

  bool scalar() {
    enter();
    return true;
  }

  void enter() {
    if (!frames_.empty() && frames_.back().is_array) frames_.back().key = std::to_string(frames_.back().index++);
    std::string p;
    for (auto& f : frames_) p += '/' + (f.is_array ? f.key : escape_token(f.key));
    index_.record(p, index_.line_before(static_cast<std::size_t>(*mark_ - begin_)));
  }

  LineIndex& index_;
  const char* begin_;
  const char* const* mark_;
  std::vector<Frame> frames_;
};

// --- typed readers -------------------------------------------------------

class Reader {
 public:
  Reader(const LineIndex& index, std::string source) : index_(index), source_(std::move(source)) {}

  [[noreturn]] void fail(const std::string& pointer, const std::string& message) const {
    throw SceneError(source_, index_.line(pointer), pointer, message);
  }

  void require_object(const json& j, const std::string& ptr) const {
    if (!j.is_object()) fail(ptr, "expected an object");
  }

  void allow_keys(const json& j, const std::string& ptr, std::set<std::string> keys) const {
    for (auto it = j.begin(); it != j.end(); ++it)
      if (!keys.count(it.key())) fail(ptr + "/" + escape_token(it.key()), "unknown key '" + it.key() + "'");
  }

  const json& member(const json& obj, const std::string& ptr, const std::string& key) const {
    require_object(obj, ptr);
    auto it = obj.find(key);
    if (it == obj.end()) fail(ptr, "missing required key '" + key + "'");
    return *it;
  }

  double number(const json& j, const std::string& ptr) const {
    if (!j.is_number()) fail(ptr, "expected a number");
    return j.get<double>();
  }

  double positive(const json& j, const std::string& ptr) const {
    const double v = number(j, ptr);
    if (!(v > 0.0)) fail(ptr, "expected a positive number");
    return v;
  }

  std::uint64_t count(const json& j, const std::string& ptr) const {
    if (!j.is_number_unsigned()) fail(ptr, "expected a non-negative integer");
    return j.get<std::uint64_t>();
  }

  Complex complex(const json& j, const std::string& ptr) const {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
      fail(ptr, "expected a complex number [re, im]");
    return {j[0].get<double>(), j[1].get<double>()};
  }

  ComplexVector vector(const json& j, const std::string& ptr) const {
    if (!j.is_array() || j.empty()) fail(ptr, "expected a non-empty array of complex numbers");
    ComplexVector v;
    for (std::size_t i = 0; i < j.size(); ++i) v.push_back(complex(j[i], ptr + "/" + std::to_string(i)));
    return v;
  }

  ComplexMatrix matrix(const json& j, const std::string& ptr) const {
    if (!j.is_array() || j.empty()) fail(ptr, "expected a non-empty array of rows");
    const std::size_t rows = j.size();
    std::size_t cols = 0;
    std::vector<Complex> entries;
    for (std::size_t r = 0; r < rows; ++r) {
      const std::string rp = ptr + "/" + std::to_string(r);
      const ComplexVector row = vector(j[r], rp);
      if (r == 0) cols = row.size();
      else if (row.size() != cols)
        fail(rp, "row has " + std::to_string(row.size()) + " entries, expected " + std::to_string(cols));
      entries.insert(entries.end(), row.begin(), row.end());
    }
    return ComplexMatrix(rows, cols, std::move(entries));
  }

  std::pair<std::size_t, std::size_t> dims(const json& obj, const std::string& ptr) const {
    const std::string dp = ptr + "/dims";
    const json& d = member(obj, ptr, "dims");
    if (!d.is_array() || d.size() != 2) fail(dp, "expected [dim_a, dim_b]");
    const auto da = count(d[0], dp + "/0");
    const auto db = count(d[1], dp + "/1");
    if (da < 1 || db < 1) fail(dp, "dimensions must be positive");
    return {da, db};
  }

  // Named basis, optionally rotated by a unitary (columns U * b_i) and
  // conjugated; or an explicit unitary matrix whose columns are the basis.
  Basis basis(const json& j, const std::string& ptr, std::size_t dim) const {
    if (j.is_string()) return named_basis(j.get<std::string>(), ptr, dim);
    if (j.is_array()) {
      ComplexMatrix m = matrix(j, ptr);
      check_square(m, ptr, dim);
      return guarded(ptr, [&] { return Basis(std::move(m)); });
    }
    require_object(j, ptr);
    allow_keys(j, ptr, {"basis", "unitary", "conjugate"});
    Basis b = basis(member(j, ptr, "basis"), ptr + "/basis", dim);
    if (auto it = j.find("unitary"); it != j.end()) {
      ComplexMatrix u = matrix(*it, ptr + "/unitary");
      check_square(u, ptr + "/unitary", dim);
      if (unitarity_residual(u) > 1e-9) fail(ptr + "/unitary", "matrix is not unitary");
      b = guarded(ptr + "/unitary", [&] { return Basis(u * b.matrix()); });
    }
    if (auto it = j.find("conjugate"); it != j.end()) {
      if (!it->is_boolean()) fail(ptr + "/conjugate", "expected true or false");
      if (it->get<bool>()) b = b.conjugate();
    }
    return b;
  }

  Povm povm(const json& j, const std::string& ptr, std::size_t dim) const {
    if (j.is_object() && j.contains("effects")) {
      allow_keys(j, ptr, {"effects"});
      const json& e = j["effects"];
      const std::string ep = ptr + "/effects";
      if (!e.is_array() || e.empty()) fail(ep, "expected a non-empty array of matrices");
      std::vector<ComplexMatrix> effects;
      for (std::size_t i = 0; i < e.size(); ++i) {
        const std::string ip = ep + "/" + std::to_string(i);
        effects.push_back(matrix(e[i], ip));
        check_square(effects.back(), ip, dim);
        const auto h = guarded(ip, [&] { return HermitianCheckedMatrix(effects.back()); });
        if (!is_psd(h)) fail(ip, "effect is not positive semidefinite");
      }
      return guarded(ep, [&] { return Povm(effects); });
    }
    return Povm::projective(basis(j, ptr, dim).matrix());
  }

  std::vector<Povm> assemblage(const json& j, const std::string& ptr, std::size_t dim) const {
    if (!j.is_array()) fail(ptr, "expected an array of measurements");
    std::vector<Povm> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(povm(j[i], ptr + "/" + std::to_string(i), dim));
    return out;
  }

  template <typename F>
  auto guarded(const std::string& ptr, F&& f) const -> decltype(f()) {
    try {
      return f();
    } catch (const lhvlab::Error& e) {
      fail(ptr, e.what());
    }
  }

 private:
  Basis named_basis(const std::string& name, const std::string& ptr, std::size_t dim) const {
    if (name == "computational") return Basis::computational(dim);
    if (name == "fourier") return fourier_basis(dim);
    fail(ptr, "unknown basis '" + name + "' (expected computational or fourier)");
  }

  void check_square(const ComplexMatrix& m, const std::string& ptr, std::size_t dim) const {
    if (m.rows() != dim || m.cols() != dim)
      fail(ptr, "expected a " + std::to_string(dim) + "x" + std::to_string(dim) + " matrix, got " +
                    std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }

  const LineIndex& index_;
  std::string source_;
};

struct StateSpec {
  DensityMatrix rho;
  std::size_t dim_a;
  std::size_t dim_b;
};

StateSpec read_state(const Reader& rd, const json& s, const std::string& ptr) {
  rd.require_object(s, ptr);
  const json& type = rd.member(s, ptr, "type");
  if (!type.is_string()) rd.fail(ptr + "/type", "expected a string");
  const std::string t = type.get<std::string>();

  if (t == "maximally_entangled") {
    rd.allow_keys(s, ptr, {"type", "n"});
    const auto n = rd.count(rd.member(s, ptr, "n"), ptr + "/n");
    return rd.guarded(ptr + "/n", [&] { return StateSpec{maximally_entangled(n), n, n}; });
  }
  if (t == "density") {
    rd.allow_keys(s, ptr, {"type", "dims", "matrix"});
    const auto [da, db] = rd.dims(s, ptr);
    ComplexMatrix m = rd.matrix(rd.member(s, ptr, "matrix"), ptr + "/matrix");
    if (m.rows() != da * db || m.cols() != da * db)
      rd.fail(ptr + "/matrix", "expected a " + std::to_string(da * db) + "x" + std::to_string(da * db) +
                                   " matrix for dims [" + std::to_string(da) + ", " + std::to_string(db) + "]");
    return rd.guarded(ptr + "/matrix", [&] { return StateSpec{DensityMatrix(std::move(m)), da, db}; });
  }
  if (t == "pure") {
    rd.allow_keys(s, ptr, {"type", "dims", "vector"});
    const auto [da, db] = rd.dims(s, ptr);
    const ComplexVector v = rd.vector(rd.member(s, ptr, "vector"), ptr + "/vector");
    if (v.size() != da * db)
      rd.fail(ptr + "/vector", "expected " + std::to_string(da * db) + " amplitudes, got " + std::to_string(v.size()));
    return rd.guarded(ptr + "/vector", [&] { return StateSpec{DensityMatrix::pure(v), da, db}; });
  }
  if (t == "schmidt") {
    rd.allow_keys(s, ptr, {"type", "dims", "mu", "basis_a", "basis_b"});
    const auto [da, db] = rd.dims(s, ptr);
    const json& mj = rd.member(s, ptr, "mu");
    if (!mj.is_array() || mj.empty()) rd.fail(ptr + "/mu", "expected a non-empty array of coefficients");
    std::vector<double> mu;
    for (std::size_t i = 0; i < mj.size(); ++i) mu.push_back(rd.number(mj[i], ptr + "/mu/" + std::to_string(i)));
    if (mu.size() > std::min(da, db)) rd.fail(ptr + "/mu", "more coefficients than the smaller dimension");
    const Basis ba = s.contains("basis_a") ? rd.basis(s["basis_a"], ptr + "/basis_a", da) : Basis::computational(da);
    const Basis bb = s.contains("basis_b") ? rd.basis(s["basis_b"], ptr + "/basis_b", db) : Basis::computational(db);
    return rd.guarded(ptr + "/mu", [&] { return StateSpec{pure_from_schmidt(mu, ba, bb), da, db}; });
  }
  rd.fail(ptr + "/type", "unknown state type '" + t + "' (expected density, pure, maximally_entangled or schmidt)");
}

SolverParams read_params(const Reader& rd, const json& j, const std::string& ptr) {
  SolverParams p = SolverParams::defaults();
  rd.require_object(j, ptr);
  rd.allow_keys(j, ptr, {"dist_tol", "gap_tol", "feas_tol", "max_iters", "threads", "seed"});
  if (j.contains("dist_tol")) p.dist_tol = rd.positive(j["dist_tol"], ptr + "/dist_tol");
  if (j.contains("gap_tol")) p.gap_tol = rd.positive(j["gap_tol"], ptr + "/gap_tol");
  if (j.contains("feas_tol")) p.feas_tol = rd.positive(j["feas_tol"], ptr + "/feas_tol");
  if (j.contains("max_iters")) {
    p.max_iters = rd.count(j["max_iters"], ptr + "/max_iters");
    if (p.max_iters < 1) rd.fail(ptr + "/max_iters", "must be at least 1");
  }
  if (j.contains("threads")) {
    p.threads = rd.count(j["threads"], ptr + "/threads");
    if (p.threads < 1) rd.fail(ptr + "/threads", "must be at least 1");
  }
  if (j.contains("seed")) p.seed = rd.count(j["seed"], ptr + "/seed");
  return p;
}

Task read_task(const Reader& rd, const json& j) {
  if (!j.is_string()) rd.fail("/task", "expected a string");
  const std::string t = j.get<std::string>();
  for (Task task : {Task::Bell, Task::SteerAB, Task::SteerBA, Task::Criterion, Task::ConstructMeasurements})
    if (t == task_name(task)) return task;
  rd.fail("/task", "unknown task '" + t +
                       "' (expected bell, steer-ab, steer-ba, criterion or construct-measurements)");
}

}  // namespace

Scene parse_scene(const std::string& text, const std::string& source) {
  LineIndex index(text);
  const char* begin = text.data();
  const char* mark = begin;
  LineRecorder recorder(index, begin, &mark);
  if (!json::sax_parse(TrackingIterator(begin, &mark), TrackingIterator(begin + text.size(), &mark),
                       &recorder)) {
    const std::size_t at = recorder.error_position == 0 ? 0 : recorder.error_position - 1;
    std::string msg = recorder.error_message;
    if (auto pos = msg.find("parse error"); pos != std::string::npos) msg = msg.substr(pos);
    throw SceneError(source, index.line_of(at), "", "invalid JSON: " + msg);
  }
  const json root = json::parse(text);
  const Reader rd(index, source);

  rd.require_object(root, "");
  rd.allow_keys(root, "", {"schema", "description", "task", "state", "alice_assemblage", "bob_assemblage", "params"});
  const json& schema = rd.member(root, "", "schema");
  if (!schema.is_number_unsigned() || schema.get<std::uint64_t>() != 1)
    rd.fail("/schema", "unsupported schema version (expected 1)");

  const Task task = read_task(rd, rd.member(root, "", "task"));
  StateSpec st = read_state(rd, rd.member(root, "", "state"), "/state");

  std::vector<Povm> alice, bob;
  if (root.contains("alice_assemblage")) alice = rd.assemblage(root["alice_assemblage"], "/alice_assemblage", st.dim_a);
  if (root.contains("bob_assemblage")) bob = rd.assemblage(root["bob_assemblage"], "/bob_assemblage", st.dim_b);

  const auto need = [&](const std::vector<Povm>& v, const char* key) {
    const std::string ptr = std::string("/") + key;
    if (v.empty())
      rd.fail(root.contains(key) ? ptr : "", std::string("task ") + task_name(task) + " needs a non-empty " + key);
  };
  switch (task) {
    case Task::Bell:
      need(alice, "alice_assemblage");
      need(bob, "bob_assemblage");
      break;
    case Task::SteerAB: need(alice, "alice_assemblage"); break;
    case Task::SteerBA: need(bob, "bob_assemblage"); break;
    case Task::Criterion:
      if (alice.size() != 2) rd.fail(root.contains("alice_assemblage") ? "/alice_assemblage" : "",
                                     "task criterion needs exactly two measurements P, Q in alice_assemblage");
      for (std::size_t i = 0; i < 2; ++i)
        if (alice[i].outcomes() != st.dim_b)
          rd.fail("/alice_assemblage/" + std::to_string(i),
                  "criterion measurements need exactly dim_b = " + std::to_string(st.dim_b) + " outcomes");
      break;
    case Task::ConstructMeasurements:
      if (st.dim_a != st.dim_b) rd.fail("/state/dims", "construct-measurements needs equal dimensions n x n");
      break;
  }

  SolverParams params = SolverParams::defaults();
  if (root.contains("params")) params = read_params(rd, root["params"], "/params");

  return Scene{task, std::move(st.rho), st.dim_a, st.dim_b, std::move(alice), std::move(bob), params};
}

Scene load_scene(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SceneError(path, 0, "", "cannot open file");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_scene(ss.str(), path);
}

}  // namespace lhvlab::cli
