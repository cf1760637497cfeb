#include <logtensor/series_io.hpp>

#include <sstream>
#include <stdexcept>

namespace logtensor {

namespace {

using nlohmann::json;

json integer_json(const mpz_class &z)
{
    if (z.fits_slong_p()) return json(z.get_si());
    return json(z.get_str());
}

mpz_class integer_from_json(const json &j)
{
    if (j.is_number_integer()) return mpz_class(j.get<long>());
    if (j.is_string()) return mpz_class(j.get<std::string>());
    throw std::invalid_argument("expected integer");
}

std::vector<std::string> split(std::string_view s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(ch);
        }
    }
    out.push_back(cur);
    return out;
}

std::vector<std::string> words(const std::string &s)
{
    std::istringstream is(s);
    std::vector<std::string> out;
    std::string w;
    while (is >> w) out.push_back(w);
    return out;
}

} // namespace

std::string to_text(const LogSeries &s)
{
    std::ostringstream os;
    const auto &w = s.window();
    if (w.bounded)
        os << "window " << w.exponent_lo.get_str() << " " << w.exponent_hi.get_str() << " "
           << w.max_logpower << "\n";
    else
        os << "window open\n";
    for (const auto &[k, c] : s.terms()) {
        os << c.re().get_str() << " " << c.im().get_str();
        for (const auto &f : k.factors())
            os << " ; " << var_name(f.var) << " " << f.exp.re().get_str() << " "
               << f.exp.im().get_str() << " " << f.logpow;
        os << "\n";
    }
    return os.str();
}

LogSeries series_from_text(std::string_view text)
{
    std::istringstream is{std::string(text)};
    std::string line;
    LogSeries s;
    bool have_window = false;
    while (std::getline(is, line)) {
        auto ws = words(line);
        if (ws.empty()) continue;
        if (ws[0] == "window") {
            if (have_window) throw std::invalid_argument("series text: duplicate window line");
            have_window = true;
            if (ws.size() == 2 && ws[1] == "open") continue;
            if (ws.size() != 4) throw std::invalid_argument("series text: bad window line");
            s = LogSeries(TruncationWindow::make(parse_rational(ws[1]), parse_rational(ws[2]),
                                                 static_cast<unsigned>(std::stoul(ws[3]))));
            continue;
        }
        auto parts = split(line, ';');
        auto cw = words(parts[0]);
        if (cw.size() != 2) throw std::invalid_argument("series text: bad coefficient: " + line);
        ExactComplex c(parse_rational(cw[0]), parse_rational(cw[1]));
        MonoKey key;
        for (std::size_t i = 1; i < parts.size(); ++i) {
            auto fw = words(parts[i]);
            if (fw.size() != 4) throw std::invalid_argument("series text: bad factor: " + parts[i]);
            auto v = parse_var(fw[0]);
            if (!v) throw std::invalid_argument("series text: unknown variable " + fw[0]);
            if (key.find(*v)) throw std::invalid_argument("series text: repeated variable " + fw[0]);
            key = key * MonoKey::single(*v, ExactComplex(parse_rational(fw[1]), parse_rational(fw[2])),
                                        static_cast<unsigned>(std::stoul(fw[3])));
        }
        s.add_term(key, c);
    }
    return s;
}

json rational_json(const Rational &q) { return json(q.get_str()); }

Rational rational_from_json(const json &j)
{
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long>());
    throw std::invalid_argument("expected rational string");
}

json complex_json(const ExactComplex &c) { return json::array({rational_json(c.re()), rational_json(c.im())}); }

ExactComplex complex_from_json(const json &j)
{
    if (j.is_array() && j.size() == 2) return {rational_from_json(j[0]), rational_from_json(j[1])};
    return ExactComplex(rational_from_json(j));
}

json to_json(const TruncationWindow &w)
{
    if (!w.bounded) return nullptr;
    return json{{"lo", rational_json(w.exponent_lo)},
                {"hi", rational_json(w.exponent_hi)},
                {"max_logpower", w.max_logpower}};
}

TruncationWindow window_from_json(const json &j)
{
    if (j.is_null()) return TruncationWindow::open();
    return TruncationWindow::make(rational_from_json(j.at("lo")), rational_from_json(j.at("hi")),
                                  j.at("max_logpower").get<unsigned>());
}

json to_json(const LogSeries &s)
{
    json terms = json::array();
    for (const auto &[k, c] : s.terms()) {
        json mono = json::array();
        for (const auto &f : k.factors())
            mono.push_back({{"v", std::string(var_name(f.var))},
                            {"e", json::array({integer_json(f.exp.re().get_num()),
                                               integer_json(f.exp.re().get_den()),
                                               integer_json(f.exp.im().get_num()),
                                               integer_json(f.exp.im().get_den())})},
                            {"k", f.logpow}});
        terms.push_back({{"c", complex_json(c)}, {"mono", mono}});
    }
    return json{{"window", to_json(s.window())}, {"terms", terms}};
}

LogSeries series_from_json(const json &j)
{
    LogSeries s(j.contains("window") ? window_from_json(j["window"]) : TruncationWindow::open());
    for (const auto &t : j.at("terms")) {
        MonoKey key;
        for (const auto &m : t.at("mono")) {
            auto v = parse_var(m.at("v").get<std::string>());
            if (!v) throw std::invalid_argument("series json: unknown variable");
            if (key.find(*v)) throw std::invalid_argument("series json: repeated variable");
            const auto &e = m.at("e");
            if (!e.is_array() || e.size() != 4) throw std::invalid_argument("series json: bad exponent");
            mpz_class den = integer_from_json(e[1]), iden = integer_from_json(e[3]);
            if (den == 0 || iden == 0) throw std::invalid_argument("series json: zero denominator");
            Rational re(integer_from_json(e[0]), den), im(integer_from_json(e[2]), iden);
            re.canonicalize();
            im.canonicalize();
            key = key * MonoKey::single(*v, ExactComplex(re, im), m.at("k").get<unsigned>());
        }
        s.add_term(key, complex_from_json(t.at("c")));
    }
    return s;
}

} // namespace logtensor
