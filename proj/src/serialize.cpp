#include "cliffspec/serialize.hpp"

#include <cstdio>
#include <fstream>

namespace cliffspec {

std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Json to_json(const Multivector& s) {
    Json coeffs = Json::object();
    for (Mask a = 0; a < static_cast<Mask>(s.dim()); ++a)
        if (s[a] != 0.0) coeffs[mask_to_string(a)] = s[a];
    return Json{{"n", s.n()}, {"coeffs", std::move(coeffs)}};
}

Multivector multivector_from_json(const Json& j) {
    if (!j.contains("n")) throw ConfigError("multivector json: missing 'n'");
    Multivector s(j.at("n").get<int>());
    if (j.contains("coeffs")) {
        for (const auto& [key, value] : j.at("coeffs").items()) {
            Mask a = 0;
            for (char c : key) {
                if (c < '1' || c > '0' + kMaxAlgebraDim)
                    throw ConfigError("multivector json: bad index key '" + key + "'");
                a |= Mask{1} << (c - '1');
            }
            if (a >= static_cast<Mask>(s.dim()))
                throw ConfigError("multivector json: key '" + key + "' outside algebra");
            s[a] = value.get<double>();
        }
    }
    return s;
}

Json to_json(const Paravector& p) {
    return Json{{"n", p.n()}, {"components", p.components()}};
}

Paravector paravector_from_json(const Json& j) {
    const int n = j.at("n").get<int>();
    return Paravector(n, j.at("components").get<std::vector<double>>());
}

Json to_json(const CliffordOperator& T) {
    Json rows = Json::array();
    for (int i = 0; i < T.m(); ++i) {
        Json row = Json::array();
        for (int j = 0; j < T.m(); ++j) row.push_back(to_json(T.entry(i, j)));
        rows.push_back(std::move(row));
    }
    return Json{{"n", T.n()}, {"m", T.m()}, {"entries", std::move(rows)}};
}

CliffordOperator operator_from_json(const Json& j) {
    const int n = j.at("n").get<int>();
    const int m = j.at("m").get<int>();
    const auto& rows = j.at("entries");
    if (static_cast<int>(rows.size()) != m) throw ConfigError("operator json: wrong row count");
    std::vector<Multivector> ents;
    ents.reserve(static_cast<std::size_t>(m) * m);
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != m) throw ConfigError("operator json: wrong column count");
        for (const auto& cell : row) {
            Multivector mv = multivector_from_json(cell);
            if (mv.n() != n) throw ConfigError("operator json: entry algebra mismatch");
            ents.push_back(std::move(mv));
        }
    }
    return CliffordOperator(n, m, std::move(ents));
}

void export_real_rep_csv(const Eigen::MatrixXd& rep, const std::string& path) {
    if (path.empty()) throw IoError("export_real_rep_csv: empty output path");
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("export_real_rep_csv: cannot open '" + path + "'");
    for (Eigen::Index i = 0; i < rep.rows(); ++i) {
        for (Eigen::Index j = 0; j < rep.cols(); ++j) {
            if (j) out << ',';
            out << format_g17(rep(i, j));
        }
        out << '\n';
    }
    if (!out) throw IoError("export_real_rep_csv: write failed for '" + path + "'");
}

} // namespace cliffspec
