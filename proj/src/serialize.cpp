#include "selmer/serialize.hpp"

#include "selmer/errors.hpp"

namespace selmer {

Json poly_to_json(const UniPoly& p) {
    Json arr = Json::array();
    for (const auto& c : p.coeffs()) arr.push_back(to_string(c));
    return arr;
}

UniPoly poly_from_json(const Json& j) {
    if (!j.is_array()) throw DomainError("polynomial must be a JSON array of coefficient strings");
    std::vector<Rat> cs;
    for (const auto& e : j) {
        if (e.is_string())
            cs.push_back(parse_rat(e.get<std::string>()));
        else if (e.is_number_integer())
            cs.emplace_back(Int(std::to_string(e.get<long long>())));
        else
            throw DomainError("polynomial coefficient must be a string or integer");
    }
    return UniPoly(cs);
}

Json whom_to_json(const WHomPoly& p) {
    Json j;
    j["tau"] = p.tau();
    j["weighted_degree"] = p.weighted_degree();
    j["coeffs"] = poly_to_json(p.dehom());
    return j;
}

WHomPoly whom_from_json(const Json& j) {
    return WHomPoly(j.at("tau").get<int>(), j.at("weighted_degree").get<int>(), poly_from_json(j.at("coeffs")));
}

Json ratfunc_to_json(const RatFunc& r) {
    if (r.is_polynomial()) return poly_to_json(r.as_polynomial());
    Json j;
    j["num"] = poly_to_json(r.num());
    j["den"] = poly_to_json(r.den());
    return j;
}

RatFunc ratfunc_from_json(const Json& j) {
    if (j.is_array()) return RatFunc(poly_from_json(j));
    return RatFunc(poly_from_json(j.at("num")), poly_from_json(j.at("den")));
}

}  // namespace selmer
