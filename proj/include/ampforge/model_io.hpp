#pragma once

// JSON round trip for problem systems and the modes report.

#include "ampforge/expr_io.hpp"
#include "ampforge/model.hpp"

#include <nlohmann/json.hpp>

namespace ampforge {

template <class C>
ordered_json system_to_json(const OdeSystem<C>& sys) {
    ordered_json j;
    j["name"] = sys.name;
    j["mode"] = coeff_traits<C>::exact ? "exact" : "numeric";
    j["dimension"] = sys.n;
    j["order"] = sys.second_order ? "second" : "first";
    ordered_json G = ordered_json::array();
    for (const auto& row : sys.G) {
        ordered_json r = ordered_json::array();
        for (const auto& c : row)
            r.push_back(ordered_json::array({coeff_traits<C>::re_string(c), coeff_traits<C>::im_string(c)}));
        G.push_back(std::move(r));
    }
    j["linear"] = std::move(G);
    ordered_json terms = ordered_json::array();
    for (const auto& t : sys.nonlin) {
        ordered_json jt;
        jt["eps_power"] = t.eps_power;
        jt["component"] = t.comp;
        jt["coeff"] = ordered_json::array({coeff_traits<C>::re_string(t.coeff), coeff_traits<C>::im_string(t.coeff)});
        jt["pow"] = t.sm.pow;
        jt["dpow"] = t.sm.dpow;
        terms.push_back(std::move(jt));
    }
    j["nonlinear"] = std::move(terms);
    j["ics"] = sys.ics;
    j["epsilon"] = sys.epsilon;
    return j;
}

template <class C>
OdeSystem<C> system_from_json(const ordered_json& j) {
    if ((j.at("mode").get<std::string>() == "exact") != coeff_traits<C>::exact)
        throw std::invalid_argument("system mode mismatch");
    OdeSystem<C> sys;
    sys.name = j.at("name").get<std::string>();
    sys.n = j.at("dimension").get<int>();
    sys.second_order = j.at("order").get<std::string>() == "second";
    for (const auto& row : j.at("linear")) {
        std::vector<C> r;
        for (const auto& c : row)
            r.push_back(coeff_traits<C>::parse(c[0].get<std::string>(), c[1].get<std::string>()));
        sys.G.push_back(std::move(r));
    }
    for (const auto& jt : j.at("nonlinear")) {
        NonlinTerm<C> t;
        t.eps_power = jt.at("eps_power").get<int>();
        t.comp = jt.at("component").get<int>();
        t.coeff = coeff_traits<C>::parse(jt.at("coeff")[0].get<std::string>(), jt.at("coeff")[1].get<std::string>());
        t.sm.pow = jt.at("pow").get<std::vector<int>>();
        t.sm.dpow = jt.at("dpow").get<std::vector<int>>();
        sys.nonlin.push_back(std::move(t));
    }
    sys.ics = j.at("ics").get<std::vector<double>>();
    sys.epsilon = j.at("epsilon").get<double>();
    validate_system(sys);
    return sys;
}

template <class C>
ordered_json modes_report(const ModeData<C>& md) {
    ordered_json j;
    j["omega"] = coeff_traits<C>::exact ? ordered_json(to_string(std::get<0>(std::tuple(md.omega))))
                                        : ordered_json(coeff_traits<C>::real_to_double(md.omega));
    ordered_json arr = ordered_json::array();
    for (const auto& m : md.modes) {
        ordered_json jm;
        jm["amplitude"] = m.amp_name;
        jm["k"] = m.k;
        ordered_json v = ordered_json::array();
        for (const auto& c : m.vec)
            v.push_back(ordered_json::array({coeff_traits<C>::re_string(c), coeff_traits<C>::im_string(c)}));
        jm["eigenvector"] = std::move(v);
        arr.push_back(std::move(jm));
    }
    j["modes"] = std::move(arr);
    return j;
}

}  // namespace ampforge
