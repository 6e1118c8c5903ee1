#pragma once

// JSON input files: geodesic class data and eigenvalue lists. Complex
// entries may be given as a number or as [re, im].

#include <algorithm>
#include <fstream>
#include <string>

#include "json.hpp"

#include "spectral_forge/errors.hpp"
#include "spectral_forge/spectral.hpp"

namespace spectral_forge::io {

using nlohmann::json;
using spectral::cplx;

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DomainError("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw DomainError(path + ": " + e.what());
    }
}

inline cplx complex_from_json(const json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    throw DomainError("expected a number or [re, im], got " + j.dump());
}

inline std::vector<cplx> complex_list(const json& j) {
    std::vector<cplx> out;
    for (const auto& v : j) out.push_back(complex_from_json(v));
    return out;
}

inline spectral::GeodesicClassData class_data_from_json(const json& j) {
    spectral::GeodesicClassData d;
    try {
        d.area = j.at("area").get<double>();
        for (const auto& h : j.value("hyperbolic", json::array()))
            d.hyperbolic.push_back({h.at("norm").get<double>(), complex_list(h.value("chi_powers", json::array({1.0})))});
        for (const auto& e : j.value("elliptic", json::array()))
            d.elliptic.push_back({e.at("order").get<int>(), complex_list(e.at("chi_values"))});
        if (j.contains("cusps")) {
            const auto& c = j["cusps"];
            d.cusps.open = c.value("open", 0);
            d.cusps.closed = c.value("closed", 0);
            d.cusps.chi_values = complex_list(c.value("chi_values", json::array()));
            d.cusps.k1 = c.value("k1", 0.0);
            d.cusps.phi_trace = c.value("phi_trace", 0.0);
            if (d.cusps.chi_values.size() != static_cast<std::size_t>(d.cusps.closed))
                throw DomainError("class data: need one chi value per closed cusp");
        }
    } catch (const json::exception& e) {
        throw DomainError(std::string("class data: ") + e.what());
    }
    d.validate();
    return d;
}

/// A bare array, or an object with an "eigenvalues" array. Sorted on input.
inline spectral::SpectrumList spectrum_from_json(const json& j) {
    const json& arr = j.is_object() ? j.at("eigenvalues") : j;
    if (!arr.is_array()) throw DomainError("spectrum: expected an array of eigenvalues");
    spectral::SpectrumList s;
    for (const auto& v : arr) {
        if (!v.is_number()) throw DomainError("spectrum: eigenvalues must be numbers");
        s.eigenvalues.push_back(v.get<double>());
    }
    std::sort(s.eigenvalues.begin(), s.eigenvalues.end());
    s.validate();
    return s;
}

}  // namespace spectral_forge::io
