#include "qvi/cli/problem_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "qvi/errors.hpp"

namespace qvi::cli {

using nlohmann::json;

InputError::InputError(std::string field, const std::string& message)
    : std::runtime_error(field + ": " + message), field_(std::move(field)) {}

namespace {

const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw InputError(path.empty() ? "/" : path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw InputError(path + "/" + key, "missing required field");
  return *it;
}

const json* optional_field(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return nullptr;
  return &*it;
}

double parse_plain(const std::string& text, const std::string& path) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw InputError(path, "not a number: \"" + text + "\"");
  }
  while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used]))) ++used;
  if (used != text.size()) throw InputError(path, "not a number: \"" + text + "\"");
  return v;
}

Index parse_dim(const json& doc) {
  const json& d = require(doc, "dim", "");
  if (!d.is_number_integer() || d.get<long long>() <= 0)
    throw InputError("/dim", "must be a positive integer");
  return static_cast<Index>(d.get<long long>());
}

Point parse_vector(const json& v, Index n, const std::string& path) {
  if (!v.is_array()) throw InputError(path, "expected an array of " + std::to_string(n) + " numbers");
  if (static_cast<Index>(v.size()) != n)
    throw InputError(path, "expected " + std::to_string(n) + " entries, got " +
                               std::to_string(v.size()));
  Point p(n);
  for (Index i = 0; i < n; ++i)
    p[i] = parse_number(v[static_cast<std::size_t>(i)], path + "/" + std::to_string(i));
  return p;
}

Matrix parse_matrix(const json& v, Index n, const std::string& path) {
  if (!v.is_array() || static_cast<Index>(v.size()) != n)
    throw InputError(path, "expected a " + std::to_string(n) + "x" + std::to_string(n) +
                               " matrix as an array of rows");
  Matrix m(n, n);
  for (Index r = 0; r < n; ++r)
    m.row(r) = parse_vector(v[static_cast<std::size_t>(r)], n, path + "/" + std::to_string(r))
                   .transpose();
  return m;
}

Box parse_bounds(const json& b, Index n, const std::string& path) {
  Point lower = parse_vector(require(b, "lower", path), n, path + "/lower");
  Point upper = parse_vector(require(b, "upper", path), n, path + "/upper");
  try {
    return Box(std::move(lower), std::move(upper));
  } catch (const std::invalid_argument& e) {
    throw InputError(path, e.what());
  }
}

std::string parse_kind(const json& obj, const std::string& path) {
  const json& k = require(obj, "kind", path);
  if (!k.is_string()) throw InputError(path + "/kind", "expected a string");
  return k.get<std::string>();
}

ConvexSet parse_set(const json& s, Index n, const std::string& path) {
  const std::string kind = parse_kind(s, path);
  if (kind == "box") return parse_bounds(require(s, "bounds", path), n, path + "/bounds");
  if (kind == "polytope") {
    std::optional<Box> box;
    if (const json* b = optional_field(s, "bounds")) box = parse_bounds(*b, n, path + "/bounds");
    std::vector<Halfspace> hs;
    if (const json* list = optional_field(s, "halfspaces")) {
      if (!list->is_array()) throw InputError(path + "/halfspaces", "expected an array");
      for (std::size_t i = 0; i < list->size(); ++i) {
        const std::string hp = path + "/halfspaces/" + std::to_string(i);
        Halfspace h;
        h.normal = parse_vector(require((*list)[i], "normal", hp), n, hp + "/normal");
        h.offset = parse_number(require((*list)[i], "offset", hp), hp + "/offset");
        hs.push_back(std::move(h));
      }
    }
    try {
      return Polytope(std::move(box), std::move(hs));
    } catch (const std::invalid_argument& e) {
      throw InputError(path, e.what());
    }
  }
  if (kind == "segment") {
    Point a = parse_vector(require(s, "a", path), n, path + "/a");
    Point b = parse_vector(require(s, "b", path), n, path + "/b");
    return Segment(std::move(a), std::move(b));
  }
  if (kind == "space") return FullSpace(n);
  throw InputError(path + "/kind", "unrecognized set kind \"" + kind + "\"");
}

MonotoneMap parse_operator(const json& op, Index n, const std::string& path) {
  const std::string kind = parse_kind(op, path);
  if (kind != "affine") throw InputError(path + "/kind", "unrecognized operator kind \"" + kind + "\"");
  Matrix m = parse_matrix(require(op, "matrix", path), n, path + "/matrix");
  Point q = Point::Zero(n);
  if (const json* off = optional_field(op, "offset")) q = parse_vector(*off, n, path + "/offset");
  const json* l = optional_field(op, "L");
  const json* mu = optional_field(op, "mu");
  try {
    if (l || mu) {
      AffineMap exact(m, q);
      const double lv = l ? parse_number(*l, path + "/L") : exact.lipschitz();
      const double mv = mu ? parse_number(*mu, path + "/mu") : exact.monotonicity();
      return AffineMap(std::move(m), std::move(q), lv, mv);
    }
    return AffineMap(std::move(m), std::move(q));
  } catch (const std::invalid_argument& e) {
    throw InputError(path, e.what());
  }
}

MovingSet parse_moving_set(const json& ms, Index n, const std::string& path) {
  const std::string kind = parse_kind(ms, path);
  try {
    if (kind == "translated-base") {
      ConvexSet base = parse_set(require(ms, "base", path), n, path + "/base");
      Matrix shift = parse_matrix(require(ms, "shift_matrix", path), n, path + "/shift_matrix");
      const json* l = optional_field(ms, "lipschitz_l");
      const double lv = l ? parse_number(*l, path + "/lipschitz_l") : operator_norm(shift);
      return MovingSet::translated(std::move(base), std::move(shift), lv);
    }
    if (kind == "segment-family") {
      Point a0 = parse_vector(require(ms, "a0", path), n, path + "/a0");
      Point b0 = parse_vector(require(ms, "b0", path), n, path + "/b0");
      Matrix am = Matrix::Zero(n, n);
      Matrix bm = Matrix::Zero(n, n);
      if (const json* a = optional_field(ms, "a_matrix")) am = parse_matrix(*a, n, path + "/a_matrix");
      if (const json* b = optional_field(ms, "b_matrix")) bm = parse_matrix(*b, n, path + "/b_matrix");
      const double lv = parse_number(require(ms, "lipschitz_l", path), path + "/lipschitz_l");
      return MovingSet::segment_family(std::move(a0), std::move(am), std::move(b0),
                                       std::move(bm), lv);
    }
  } catch (const std::invalid_argument& e) {
    throw InputError(path, e.what());
  }
  throw InputError(path + "/kind", "unrecognized moving set kind \"" + kind + "\"");
}

std::size_t parse_count(const json& v, const std::string& path) {
  if (v.is_number_integer() && v.get<long long>() > 0) return v.get<std::size_t>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d >= 1.0 && d == std::floor(d) && d < 1e15) return static_cast<std::size_t>(d);
  }
  throw InputError(path, "must be a positive integer");
}

FileParams parse_params(const json& doc) {
  FileParams p;
  const json* params = optional_field(doc, "params");
  if (!params) return p;
  if (!params->is_object()) throw InputError("/params", "expected an object");
  auto positive = [&](const char* key) -> std::optional<double> {
    const json* v = optional_field(*params, key);
    if (!v) return std::nullopt;
    const std::string path = std::string("/params/") + key;
    const double d = parse_number(*v, path);
    if (!(d > 0.0)) throw InputError(path, "must be positive");
    return d;
  };
  p.xi = positive("xi");
  p.alpha = positive("alpha");
  p.beta = positive("beta");
  p.tol = positive("tol");
  p.gamma_step = positive("gamma_step");
  if (const json* v = optional_field(*params, "max_iter")) p.max_iter = parse_count(*v, "/params/max_iter");
  if (const json* v = optional_field(*params, "seed")) {
    if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<long long>() >= 0))
      throw InputError("/params/seed", "must be a nonnegative integer");
    p.seed = v->get<std::uint64_t>();
  }
  return p;
}

std::vector<StartPoint> parse_starts(const json& doc, Index n) {
  const json& list = require(doc, "starts", "");
  if (!list.is_array() || list.empty())
    throw InputError("/starts", "expected a nonempty array of {x0, y0}");
  std::vector<StartPoint> out;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string path = "/starts/" + std::to_string(i);
    out.push_back({parse_vector(require(list[i], "x0", path), n, path + "/x0"),
                   parse_vector(require(list[i], "y0", path), n, path + "/y0")});
  }
  return out;
}

json vector_json(const Point& p) {
  json a = json::array();
  for (Index i = 0; i < p.size(); ++i) a.push_back(p[i]);
  return a;
}

json matrix_json(const Matrix& m) {
  json a = json::array();
  for (Index r = 0; r < m.rows(); ++r) a.push_back(vector_json(m.row(r).transpose()));
  return a;
}

json box_json(const Box& b) { return {{"lower", vector_json(b.lower())}, {"upper", vector_json(b.upper())}}; }

json set_json(const ConvexSet& s) {
  if (const auto* b = std::get_if<Box>(&s)) return {{"kind", "box"}, {"bounds", box_json(*b)}};
  if (const auto* seg = std::get_if<Segment>(&s))
    return {{"kind", "segment"}, {"a", vector_json(seg->a())}, {"b", vector_json(seg->b())}};
  if (const auto* poly = std::get_if<Polytope>(&s)) {
    json j = {{"kind", "polytope"}};
    if (poly->box()) j["bounds"] = box_json(*poly->box());
    json hs = json::array();
    for (const Halfspace& h : poly->halfspaces())
      hs.push_back({{"normal", vector_json(h.normal)}, {"offset", h.offset}});
    j["halfspaces"] = std::move(hs);
    return j;
  }
  return {{"kind", "space"}};
}

}  // namespace

double parse_number(const json& value, const std::string& path) {
  double v = 0.0;
  if (value.is_number()) {
    v = value.get<double>();
  } else if (value.is_string()) {
    const std::string text = value.get<std::string>();
    const auto slash = text.find('/');
    if (slash == std::string::npos) {
      v = parse_plain(text, path);
    } else {
      const double num = parse_plain(text.substr(0, slash), path);
      const double den = parse_plain(text.substr(slash + 1), path);
      if (den == 0.0) throw InputError(path, "zero denominator in \"" + text + "\"");
      v = num / den;
    }
  } else {
    throw InputError(path, "expected a number or a numeric string");
  }
  if (!std::isfinite(v)) throw InputError(path, "must be finite");
  return v;
}

ProblemFile parse_problem(const json& doc) {
  if (!doc.is_object()) throw InputError("/", "problem file must be a JSON object");
  const Index n = parse_dim(doc);
  MonotoneMap op = parse_operator(require(doc, "operator", ""), n, "/operator");
  ConvexSet domain = parse_set(require(doc, "base_set", ""), n, "/base_set");
  MovingSet phi = parse_moving_set(require(doc, "moving_set", ""), n, "/moving_set");
  FileParams params = parse_params(doc);
  std::vector<StartPoint> starts = parse_starts(doc, n);
  try {
    return {Problem(std::move(domain), std::move(phi), std::move(op)), params, std::move(starts)};
  } catch (const std::invalid_argument& e) {
    throw InputError("/operator", e.what());
  }
}

ProblemFile load_problem_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("/", "cannot open problem file \"" + path + "\"");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("/", std::string("malformed JSON: ") + e.what());
  }
  return parse_problem(doc);
}

json to_json(const ProblemFile& f) {
  const Problem& prob = f.problem;
  json doc;
  doc["dim"] = prob.dim();

  if (!prob.op().is_affine())
    throw std::invalid_argument("to_json: only affine operators can be serialized");
  const AffineMap& t = prob.op().affine();
  doc["operator"] = {{"kind", "affine"},
                     {"matrix", matrix_json(t.matrix())},
                     {"offset", vector_json(t.offset())},
                     {"L", t.lipschitz()},
                     {"mu", t.monotonicity()}};
  doc["base_set"] = set_json(prob.domain());

  const MovingSet& phi = prob.constraint_map();
  switch (phi.kind()) {
    case MovingSet::Kind::translated_base:
      doc["moving_set"] = {{"kind", "translated-base"},
                           {"base", set_json(phi.base())},
                           {"shift_matrix", matrix_json(phi.shift())},
                           {"lipschitz_l", phi.lipschitz()}};
      break;
    case MovingSet::Kind::segment_family:
      doc["moving_set"] = {{"kind", "segment-family"},
                           {"a0", vector_json(phi.a0())},
                           {"a_matrix", matrix_json(phi.a_map())},
                           {"b0", vector_json(phi.b0())},
                           {"b_matrix", matrix_json(phi.b_map())},
                           {"lipschitz_l", phi.lipschitz()}};
      break;
    case MovingSet::Kind::custom:
      throw std::invalid_argument("to_json: custom moving sets cannot be serialized");
  }

  json params = json::object();
  const FileParams& p = f.params;
  if (p.xi) params["xi"] = *p.xi;
  if (p.alpha) params["alpha"] = *p.alpha;
  if (p.beta) params["beta"] = *p.beta;
  if (p.tol) params["tol"] = *p.tol;
  if (p.max_iter) params["max_iter"] = *p.max_iter;
  if (p.gamma_step) params["gamma_step"] = *p.gamma_step;
  if (p.seed) params["seed"] = *p.seed;
  doc["params"] = std::move(params);

  json starts = json::array();
  for (const StartPoint& s : f.starts)
    starts.push_back({{"x0", vector_json(s.x0)}, {"y0", vector_json(s.y0)}});
  doc["starts"] = std::move(starts);
  return doc;
}

std::string problem_hash(const ProblemFile& f) {
  const std::string text = to_json(f).dump();
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace qvi::cli
