#pragma once

#include <string>

#include "su2cosets/actions.hpp"
#include "su2cosets/haar.hpp"
#include "su2cosets/polygon.hpp"
#include "su2cosets/spectral_form.hpp"
#include "su2cosets/tuple.hpp"

namespace su2cosets {

// JSON-lines encodings. Floats are written in decimal with 17 significant
// digits so that values round-trip bit-exactly.
//
//   CosetTuple   {"n": 3, "elements": [[a_re, a_im, b_re, b_im], ...]}
//   SpectralForm {"n": 3, "upper": [s12, s13, s23]}
//   SheetedForm  as SpectralForm plus {"sheet": -1|0|1}
//   Polygon      {"theta": [...], "vertices": [[4 floats], ...]}

std::string format_double17(double v);

std::string encode_tuple(const CosetTuple& t);
std::string encode_form(const SpectralForm& f);
std::string encode_sheeted_form(const SheetedForm& sf);
std::string encode_polygon(const SphericalPolygon& p);
std::string encode_gof_report(const GofReport& r);
std::string encode_check_report(const CheckReport& r);
std::string encode_validation_report(const ValidationReport& r);
std::string encode_actions_oracle_report(const ActionsOracleReport& r);

// Decoders throw SchemaError with a description of the violation; the CLI
// prefixes the input line number.
CosetTuple decode_tuple(const std::string& line);
SpectralForm decode_form(const std::string& line);
// Checks the sheet label against the numerical rank of the form.
SheetedForm decode_sheeted_form(const std::string& line);
SphericalPolygon decode_polygon(const std::string& line);

}  // namespace su2cosets
