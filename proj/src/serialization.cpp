#include "sumfree/serialization.hpp"

#include "sumfree/errors.hpp"

namespace sumfree {

namespace {

Word read_word(const nlohmann::json& j, int q, std::uint64_t n, const char* what) {
  if (!j.is_array() || j.size() != n) {
    throw FormatError(std::string(what) + " must be an array of length n");
  }
  Word w;
  w.reserve(n);
  for (const auto& x : j) {
    if (!x.is_number_integer()) throw FormatError(std::string(what) + " entries must be integers");
    const auto v = x.get<std::int64_t>();
    if (v < 0 || v >= q) throw FormatError(std::string(what) + " entries must lie in [0, q)");
    w.push_back(static_cast<std::uint8_t>(v));
  }
  return w;
}

const nlohmann::json& member(const nlohmann::json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw FormatError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

template <typename T>
T field(const nlohmann::json& j, const char* key) {
  const auto& value = member(j, key);
  try {
    return value.get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad field \"") + key + "\": " + e.what());
  }
}

BigInt big_field(const nlohmann::json& j, const char* key) {
  const auto text = field<std::string>(j, key);
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
    throw FormatError(std::string("field \"") + key + "\" must be a decimal string");
  }
  return BigInt(text);
}

}  // namespace

Json report_to_json(const PipelineReport& r) {
  Json j;
  j["q"] = r.q;
  j["n"] = r.n;
  j["seed"] = r.seed;
  j["p"] = r.p;
  j["s_size"] = r.s_size;
  j["w_count"] = r.w_count.str();
  j["v_count"] = r.v_count.str();
  j["v_exact"] = r.v_exact;
  j["vp_size"] = r.vp_size;
  j["vpp_size"] = r.vpp_size;
  j["marginal"] = r.marginal;
  j["log_theta"] = r.log_theta;
  j["log_lower"] = r.log_lower;
  j["log_upper"] = r.log_upper;
  j["log_lower_omits"] = "O_q(log n)";
  return j;
}

PipelineReport report_from_json(const nlohmann::json& j) {
  PipelineReport r;
  r.q = field<int>(j, "q");
  r.n = field<std::uint64_t>(j, "n");
  r.seed = field<std::uint64_t>(j, "seed");
  r.p = field<std::uint64_t>(j, "p");
  r.s_size = field<std::size_t>(j, "s_size");
  r.w_count = big_field(j, "w_count");
  r.v_count = big_field(j, "v_count");
  r.v_exact = field<bool>(j, "v_exact");
  r.vp_size = field<std::size_t>(j, "vp_size");
  r.vpp_size = field<std::size_t>(j, "vpp_size");
  r.marginal = field<std::vector<std::uint64_t>>(j, "marginal");
  r.log_theta = field<double>(j, "log_theta");
  r.log_lower = field<double>(j, "log_lower");
  r.log_upper = field<double>(j, "log_upper");
  return r;
}

Json triple_set_to_json(const TripleSet& ts, const PipelineReport* report) {
  Json j;
  j["q"] = ts.q;
  j["n"] = ts.n;
  j["target"] = ts.target;
  Json triples = Json::array();
  for (const WordTriple& t : ts.triples) {
    Json entry;
    entry["a"] = t.a;
    entry["b"] = t.b;
    entry["c"] = t.c;
    triples.push_back(std::move(entry));
  }
  j["triples"] = std::move(triples);
  if (report != nullptr) j["report"] = report_to_json(*report);
  return j;
}

TripleSet triple_set_from_json(const nlohmann::json& j) {
  TripleSet ts;
  ts.q = field<int>(j, "q");
  ts.n = field<std::uint64_t>(j, "n");
  if (ts.q < 2 || ts.q > 255) throw FormatError("q must lie in [2, 255]");
  ts.target = read_word(member(j, "target"), ts.q, ts.n, "target");
  const auto& triples = member(j, "triples");
  if (!triples.is_array()) throw FormatError("\"triples\" must be an array");
  for (const auto& t : triples) {
    if (!t.is_object() || !t.contains("a") || !t.contains("b") || !t.contains("c")) {
      throw FormatError("each triple needs \"a\", \"b\" and \"c\"");
    }
    ts.triples.push_back({read_word(t.at("a"), ts.q, ts.n, "a"), read_word(t.at("b"), ts.q, ts.n, "b"),
                          read_word(t.at("c"), ts.q, ts.n, "c")});
  }
  return ts;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace sumfree
