// JSON and CSV forms of density matrices and entanglement reports.
#pragma once

#include <cmath>
#include <string>

#include <json.hpp>

#include "cavent/concurrence.hpp"
#include "cavent/config.hpp"
#include "cavent/density_matrix.hpp"
#include "cavent/entropy.hpp"

namespace cavent {

using json = nlohmann::ordered_json;

/// Basis labels in index order for a matrix of dimension `dim`.
inline json basis_labels(int dim) {
    if (dim == 2)
        return json::array({"nu", "-nu"});
    return json::array({"nu1,nu2", "nu1,-nu2", "-nu1,nu2", "-nu1,-nu2"});
}

/// {"dim", "basis", "entries": row-major [[re, im], ...] rows, "parameters"}.
inline json to_json(const DensityMatrix& rho, const json& parameters = json::object()) {
    json rows = json::array();
    for (int i = 0; i < rho.dim(); ++i) {
        json row = json::array();
        for (int j = 0; j < rho.dim(); ++j)
            row.push_back(json::array({rho(i, j).real(), rho(i, j).imag()}));
        rows.push_back(row);
    }
    return {{"dim", rho.dim()}, {"basis", basis_labels(rho.dim())}, {"entries", rows}, {"parameters", parameters}};
}

inline DensityMatrix density_matrix_from_json(const json& j) {
    try {
        const int dim = j.at("dim").get<int>();
        const auto& rows = j.at("entries");
        if (dim != 2 && dim != 4)
            throw InvalidStateError("density matrix JSON: dim must be 2 or 4");
        if (static_cast<int>(rows.size()) != dim)
            throw InvalidStateError("density matrix JSON: row count differs from dim");
        Eigen::MatrixXcd m(dim, dim);
        for (int i = 0; i < dim; ++i) {
            if (static_cast<int>(rows[i].size()) != dim)
                throw InvalidStateError("density matrix JSON: column count differs from dim");
            for (int k = 0; k < dim; ++k)
                m(i, k) = cd(rows[i][k].at(0).get<double>(), rows[i][k].at(1).get<double>());
        }
        return DensityMatrix(m);
    } catch (const json::exception& e) {
        throw InvalidStateError(std::string("density matrix JSON: ") + e.what());
    }
}

inline json to_json(const RhoCoefficients& c) {
    auto z = [](cd x) { return json::array({x.real(), x.imag()}); };
    return {{"L1", c.l1},
            {"L2", c.l2},
            {"B1", c.b1},
            {"B2", c.b2},
            {"N", z(c.n_coef)},
            {"M", z(c.m_coef)},
            {"zeta12", c.zeta},
            {"delta11", c.delta.delta11},
            {"delta22", c.delta.delta22},
            {"delta12", c.delta.delta12}};
}

/// Converts an entropy in nats to bits when `base2` is set.
inline double entropy_units(double nats, bool base2) { return base2 ? nats / std::log(2.0) : nats; }

inline json to_json(const EntropyReport& r, bool base2 = false) {
    return {{"units", base2 ? "bits" : "nats"},
            {"exact", entropy_units(r.exact, base2)},
            {"expansion_leading", entropy_units(r.expansion_leading, base2)},
            {"expansion_with_coherence", entropy_units(r.expansion_with_coherence, base2)},
            {"rate", entropy_units(r.rate, base2)},
            {"eigenvalues", r.eigenvalues}};
}

inline json to_json(const ConcurrenceReport& r) {
    return {{"closed_form", r.closed_form},
            {"oracle", r.oracle},
            {"spin_flip_eigen_sqrts", r.spin_flip_eigen_sqrts}};
}

inline constexpr const char* kEntropyCsvHeader = "exact,expansion_leading,expansion_with_coherence,rate,p_plus,p_minus";
inline constexpr const char* kConcurrenceCsvHeader = "closed_form,oracle,sqrt_l1,sqrt_l2,sqrt_l3,sqrt_l4";

inline std::string to_csv_row(const EntropyReport& r, bool base2 = false) {
    using detail::fmt12;
    return fmt12(entropy_units(r.exact, base2)) + "," + fmt12(entropy_units(r.expansion_leading, base2)) + "," +
           fmt12(entropy_units(r.expansion_with_coherence, base2)) + "," + fmt12(entropy_units(r.rate, base2)) + "," +
           fmt12(r.eigenvalues[0]) + "," + fmt12(r.eigenvalues[1]);
}

inline std::string to_csv_row(const ConcurrenceReport& r) {
    using detail::fmt12;
    std::string s = fmt12(r.closed_form) + "," + fmt12(r.oracle);
    for (double x : r.spin_flip_eigen_sqrts)
        s += "," + fmt12(x);
    return s;
}

} // namespace cavent
