#include "apfire/stimulus_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "apfire/errors.hpp"

namespace apfire {

namespace {

using nlohmann::json;

double number_at(const json& obj, const std::string& field, const std::string& where) {
    if (!obj.contains(field)) throw ParseError(where + ": missing field \"" + field + "\"");
    const json& v = obj.at(field);
    if (!v.is_number()) throw ParseError(where + ": field \"" + field + "\" must be a number");
    return v.get<double>();
}

std::vector<double> number_list_at(const json& obj, const std::string& field,
                                   const std::string& where) {
    if (!obj.contains(field)) throw ParseError(where + ": missing field \"" + field + "\"");
    const json& v = obj.at(field);
    if (!v.is_array()) throw ParseError(where + ": field \"" + field + "\" must be an array");
    std::vector<double> out;
    out.reserve(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number())
            throw ParseError(where + ": " + field + "[" + std::to_string(i) +
                             "] must be a number");
        out.push_back(v[i].get<double>());
    }
    return out;
}

TrigPolynomial parse_trig(const json& obj, const std::string& where) {
    const double c0 = number_at(obj, "c0", where);
    std::vector<TrigTerm> terms;
    if (obj.contains("terms")) {
        const json& arr = obj.at("terms");
        if (!arr.is_array()) throw ParseError(where + ": field \"terms\" must be an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string term_where = where + ".terms[" + std::to_string(i) + "]";
            if (!arr[i].is_object()) throw ParseError(term_where + ": must be an object");
            terms.push_back({number_at(arr[i], "a", term_where),
                             number_at(arr[i], "b", term_where),
                             number_at(arr[i], "lambda", term_where)});
        }
    }
    try {
        return TrigPolynomial(c0, std::move(terms));
    } catch (const ParseError& e) {
        throw ParseError(where + ": " + e.what());
    }
}

PiecewiseConstant parse_piecewise(const json& obj, const std::string& where) {
    std::vector<double> breakpoints = number_list_at(obj, "breakpoints", where);
    std::vector<double> values = number_list_at(obj, "values", where);
    if (!obj.contains("extension")) throw ParseError(where + ": missing field \"extension\"");
    const json& ext = obj.at("extension");
    if (!ext.is_object() || !ext.contains("kind"))
        throw ParseError(where + ".extension: must be an object with a \"kind\"");
    const std::string kind = ext.at("kind").get<std::string>();
    try {
        if (kind == "periodic")
            return PiecewiseConstant::periodic(std::move(breakpoints), std::move(values));
        if (kind == "tails")
            return PiecewiseConstant::with_tails(std::move(breakpoints), std::move(values),
                                                 number_at(ext, "left", where + ".extension"),
                                                 number_at(ext, "right", where + ".extension"));
    } catch (const ParseError& e) {
        throw ParseError(where + ": " + e.what());
    }
    throw ParseError(where + ".extension.kind: expected \"periodic\" or \"tails\", got \"" +
                     kind + "\"");
}

Stimulus parse_node(const json& obj, const std::string& where) {
    if (!obj.is_object()) throw ParseError(where + ": stimulus must be a JSON object");
    if (!obj.contains("type")) throw ParseError(where + ": missing field \"type\"");
    const std::string type = obj.at("type").get<std::string>();
    if (type == "trig") return Stimulus(parse_trig(obj, where));
    if (type == "piecewise") return Stimulus(parse_piecewise(obj, where));
    if (type == "sum") {
        if (!obj.contains("parts") || !obj.at("parts").is_array())
            throw ParseError(where + ": \"sum\" needs an array field \"parts\"");
        const json& arr = obj.at("parts");
        std::vector<StimulusPart> parts;
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const std::string part_where = where + ".parts[" + std::to_string(i) + "]";
            if (!arr[i].is_object() || !arr[i].contains("type"))
                throw ParseError(part_where + ": must be an object with a \"type\"");
            const std::string part_type = arr[i].at("type").get<std::string>();
            if (part_type == "trig")
                parts.emplace_back(parse_trig(arr[i], part_where));
            else if (part_type == "piecewise")
                parts.emplace_back(parse_piecewise(arr[i], part_where));
            else
                throw ParseError(part_where + ": sum parts must be \"trig\" or \"piecewise\"");
        }
        if (parts.empty()) throw ParseError(where + ": \"sum\" needs at least one part");
        return Stimulus::sum(std::move(parts));
    }
    throw ParseError(where + ".type: expected \"trig\", \"piecewise\" or \"sum\", got \"" + type +
                     "\"");
}

json trig_to_json(const TrigPolynomial& trig) {
    json terms = json::array();
    for (const auto& term : trig.terms())
        terms.push_back({{"a", term.cos_amp}, {"b", term.sin_amp}, {"lambda", term.freq}});
    return {{"type", "trig"}, {"c0", trig.constant_term()}, {"terms", std::move(terms)}};
}

json piecewise_to_json(const PiecewiseConstant& pc) {
    json ext;
    if (pc.is_periodic())
        ext = {{"kind", "periodic"}};
    else
        ext = {{"kind", "tails"}, {"left", pc.left_tail()}, {"right", pc.right_tail()}};
    return {{"type", "piecewise"},
            {"breakpoints", pc.breakpoints()},
            {"values", pc.values()},
            {"extension", std::move(ext)}};
}

}  // namespace

Stimulus parse_stimulus(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("stimulus JSON: ") + e.what());
    }
    return parse_node(doc, "stimulus");
}

Stimulus load_stimulus(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open stimulus file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_stimulus(buf.str());
}

std::string stimulus_to_json(const Stimulus& f) {
    json doc;
    switch (f.kind()) {
        case Stimulus::Kind::Trig:
            doc = trig_to_json(std::get<TrigPolynomial>(f.parts().front()));
            break;
        case Stimulus::Kind::Piecewise:
            doc = piecewise_to_json(std::get<PiecewiseConstant>(f.parts().front()));
            break;
        case Stimulus::Kind::Sum: {
            json parts = json::array();
            for (const auto& part : f.parts()) {
                if (const auto* trig = std::get_if<TrigPolynomial>(&part))
                    parts.push_back(trig_to_json(*trig));
                else
                    parts.push_back(piecewise_to_json(std::get<PiecewiseConstant>(part)));
            }
            doc = {{"type", "sum"}, {"parts", std::move(parts)}};
            break;
        }
    }
    return doc.dump(2);
}

std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

}  // namespace apfire
