#include "su2cosets/json_io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "su2cosets/errors.hpp"

namespace su2cosets {

namespace {

using nlohmann::json;

json parse(const std::string& line) {
  try {
    return json::parse(line);
  } catch (const json::parse_error& e) {
    throw CosetError(Errc::schema_error, e.what());
  }
}

double number_at(const json& j, const char* what) {
  if (!j.is_number()) {
    throw CosetError(Errc::schema_error,
                     std::string(what) + " must be a number");
  }
  return j.get<double>();
}

std::vector<double> number_array(const json& j, const char* what,
                                 size_t expected = 0) {
  if (!j.is_array()) {
    throw CosetError(Errc::schema_error,
                     std::string(what) + " must be an array");
  }
  if (expected != 0 && j.size() != expected) {
    std::ostringstream os;
    os << what << " must have " << expected << " entries, got " << j.size();
    throw CosetError(Errc::schema_error, os.str());
  }
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) out.push_back(number_at(v, what));
  return out;
}

int int_field(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer()) {
    throw CosetError(Errc::schema_error,
                     std::string("missing integer field '") + key + "'");
  }
  return j[key].get<int>();
}

UnitQuaternion quaternion_from(const std::vector<double>& v) {
  const double n2 = v[0] * v[0] + v[1] * v[1] + v[2] * v[2] + v[3] * v[3];
  if (std::fabs(n2 - 1.0) > 1e-9) {
    throw CosetError(Errc::schema_error,
                     "element components are not unit length within 1e-9");
  }
  return UnitQuaternion::from_components(v[0], v[1], v[2], v[3]);
}

void append_quaternion(std::string& out, const UnitQuaternion& g) {
  out += '[';
  out += format_double17(g.a_re);
  out += ',';
  out += format_double17(g.a_im);
  out += ',';
  out += format_double17(g.b_re);
  out += ',';
  out += format_double17(g.b_im);
  out += ']';
}

}  // namespace

std::string format_double17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string encode_tuple(const CosetTuple& t) {
  std::string out = "{\"n\":" + std::to_string(t.size()) + ",\"elements\":[";
  for (int j = 0; j < t.size(); ++j) {
    if (j) out += ',';
    append_quaternion(out, t[j]);
  }
  out += "]}";
  return out;
}

std::string encode_form(const SpectralForm& f) {
  std::string out = "{\"n\":" + std::to_string(f.size()) + ",\"upper\":[";
  bool first = true;
  for (double v : f.upper()) {
    if (!first) out += ',';
    first = false;
    out += format_double17(v);
  }
  out += "]}";
  return out;
}

std::string encode_sheeted_form(const SheetedForm& sf) {
  std::string out = encode_form(sf.form);
  out.pop_back();  // strip '}'
  out += ",\"sheet\":" + std::to_string(sf.sheet) + "}";
  return out;
}

std::string encode_polygon(const SphericalPolygon& p) {
  std::string out = "{\"theta\":[";
  for (size_t k = 0; k < p.side_lengths.size(); ++k) {
    if (k) out += ',';
    out += format_double17(p.side_lengths[k]);
  }
  out += "],\"vertices\":[";
  for (size_t k = 0; k < p.vertices.size(); ++k) {
    if (k) out += ',';
    append_quaternion(out, p.vertices[k]);
  }
  out += "]}";
  return out;
}

std::string encode_gof_report(const GofReport& r) {
  json j;
  j["statistic"] = r.statistic_name;
  j["value"] = r.statistic_value;
  j["samples"] = r.sample_count;
  j["bin_spec"] = r.bin_spec;
  j["sigma_deviation"] = r.sigma_deviation;
  j["p_value"] = r.p_value;
  j["pass"] = r.pass;
  if (!r.note.empty()) j["note"] = r.note;
  return j.dump();
}

std::string encode_check_report(const CheckReport& r) {
  json j;
  j["check"] = r.name;
  j["trials"] = r.trials;
  j["failures"] = r.failures;
  j["max_error"] = r.max_error;
  j["pass"] = r.pass;
  if (!r.note.empty()) j["note"] = r.note;
  return j.dump();
}

std::string encode_validation_report(const ValidationReport& r) {
  json j;
  j["n"] = r.n;
  j["min_eigenvalue"] = r.min_eigenvalue;
  j["fifth_eigenvalue"] = r.fifth_eigenvalue;
  j["max_diag_deviation"] = r.max_diag_deviation;
  j["max_abs_entry"] = r.max_abs_entry;
  j["rank"] = r.rank;
  j["psd_ok"] = r.psd_ok;
  j["rank_ok"] = r.rank_ok;
  j["pass"] = r.pass;
  return j.dump();
}

std::string encode_actions_oracle_report(const ActionsOracleReport& r) {
  json j;
  j["check"] = "actions oracle";
  j["trials"] = r.trials;
  j["degenerate_skipped"] = r.degenerate_skipped;
  j["max_invert_error"] = r.max_invert_error;
  j["max_left_multiply_error"] = r.max_left_multiply_error;
  j["max_braid_error"] = r.max_braid_error;
  j["sign_checked"] = r.sign_checked;
  j["sign_agreed"] = r.sign_agreed;
  j["sign_excluded"] = r.sign_excluded;
  j["agreement"] = r.agreement();
  j["entries_pass"] = r.entries_pass;
  j["sign_rule_pass"] = r.sign_rule_pass;
  j["pass"] = r.pass;
  return j.dump();
}

CosetTuple decode_tuple(const std::string& line) {
  const json j = parse(line);
  const int n = int_field(j, "n");
  if (n < 2) {
    throw CosetError(Errc::schema_error, "tuple needs n >= 2");
  }
  if (!j.contains("elements") || !j["elements"].is_array() ||
      static_cast<int>(j["elements"].size()) != n) {
    throw CosetError(Errc::schema_error,
                     "'elements' must be an array of n quadruples");
  }
  std::vector<UnitQuaternion> els;
  els.reserve(n);
  for (const auto& e : j["elements"]) {
    els.push_back(quaternion_from(number_array(e, "element", 4)));
  }
  return CosetTuple(std::move(els));
}

SpectralForm decode_form(const std::string& line) {
  const json j = parse(line);
  const int n = int_field(j, "n");
  if (n < 2) {
    throw CosetError(Errc::schema_error, "form needs n >= 2");
  }
  if (!j.contains("upper")) {
    throw CosetError(Errc::schema_error, "missing 'upper' array");
  }
  const auto upper =
      number_array(j["upper"], "upper", static_cast<size_t>(n) * (n - 1) / 2);
  try {
    return SpectralForm::from_upper(n, upper);
  } catch (const CosetError& e) {
    throw CosetError(Errc::schema_error, e.what());
  }
}

SheetedForm decode_sheeted_form(const std::string& line) {
  const json j = parse(line);
  SpectralForm f = decode_form(line);
  int sheet_label = 0;
  if (j.contains("sheet")) {
    if (!j["sheet"].is_number_integer()) {
      throw CosetError(Errc::schema_error, "'sheet' must be -1, 0 or 1");
    }
    sheet_label = j["sheet"].get<int>();
  }
  if (sheet_label < -1 || sheet_label > 1) {
    throw CosetError(Errc::schema_error, "'sheet' must be -1, 0 or 1");
  }
  const int rank = numerical_rank(f);
  if ((sheet_label == 0) != (rank <= 3)) {
    throw CosetError(Errc::invalid_form,
                     "sheet label inconsistent with the numerical rank");
  }
  return SheetedForm{std::move(f), sheet_label};
}

SphericalPolygon decode_polygon(const std::string& line) {
  const json j = parse(line);
  if (!j.contains("theta") || !j.contains("vertices")) {
    throw CosetError(Errc::schema_error,
                     "polygon needs 'theta' and 'vertices'");
  }
  const auto theta = number_array(j["theta"], "theta");
  if (!j["vertices"].is_array() || j["vertices"].size() != theta.size()) {
    throw CosetError(Errc::schema_error,
                     "'vertices' must match 'theta' in length");
  }
  SphericalPolygon p;
  p.side_lengths = theta;
  for (const auto& v : j["vertices"]) {
    p.vertices.push_back(quaternion_from(number_array(v, "vertex", 4)));
  }
  return p;
}

}  // namespace su2cosets
