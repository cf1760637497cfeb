#pragma once

#include <string>
#include <string_view>

#include <json.hpp>

#include <logtensor/series.hpp>

namespace logtensor {

// Line format, one term per line, canonical order:
//   re im ; var exp_re exp_im logpow ; ...
// preceded by "window lo hi maxlog" or "window open".
std::string to_text(const LogSeries &s);
LogSeries series_from_text(std::string_view text);

nlohmann::json rational_json(const Rational &q);
Rational rational_from_json(const nlohmann::json &j);
nlohmann::json complex_json(const ExactComplex &c);
ExactComplex complex_from_json(const nlohmann::json &j);

nlohmann::json to_json(const TruncationWindow &w);
TruncationWindow window_from_json(const nlohmann::json &j);

// {window, terms:[{c:[re,im], mono:[{v, e:[num,den,inum,iden], k}]}]}
nlohmann::json to_json(const LogSeries &s);
LogSeries series_from_json(const nlohmann::json &j);

} // namespace logtensor
