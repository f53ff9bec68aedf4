#include "ppcorr/serialize.hpp"

#include <string>

#include "ppcorr/errors.hpp"

namespace ppcorr {
namespace {

nlohmann::json matrix_json(const char* kind, const SquareMatrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t i = 0; i < m.size(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (std::size_t j = 0; j < m.size(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return {{"kind", kind}, {"n", m.size()}, {"rows", std::move(rows)}};
}

SquareMatrix matrix_from(const nlohmann::json& j, const char* kind) {
    try {
        if (j.at("kind").get<std::string>() != kind) {
            throw InvalidArgument(std::string("expected a ") + kind + " document");
        }
        const auto n = j.at("n").get<std::size_t>();
        const auto& rows = j.at("rows");
        if (rows.size() != n) throw InvalidArgument("row count does not match n");
        SquareMatrix m(n);
        for (std::size_t r = 0; r < n; ++r) {
            if (rows[r].size() != n) throw InvalidArgument("row length does not match n");
            for (std::size_t c = 0; c < n; ++c) m(r, c) = rows[r][c].get<double>();
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("malformed ") + kind + " document: " + e.what());
    }
}

}  // namespace

nlohmann::json to_json(const CorrelationMatrix& zeta) {
    return matrix_json("correlation_matrix", zeta.matrix());
}

nlohmann::json to_json(const MixtureWeights& q) { return matrix_json("mixture_weights", q.matrix()); }

nlohmann::json to_json(const IntensitySplit& split) {
    nlohmann::json j = matrix_json("intensity_split", split.matrix());
    j["lambda"] = split.lambda();
    return j;
}

nlohmann::json to_json(const ModelParams& params) {
    return {{"lambda", params.lambda()},
            {"p", params.p()},
            {"alpha", params.alpha()},
            {"epsilon", params.epsilon()}};
}

CorrelationMatrix correlation_from_json(const nlohmann::json& j) {
    return CorrelationMatrix(matrix_from(j, "correlation_matrix"));
}

MixtureWeights weights_from_json(const nlohmann::json& j) {
    return MixtureWeights(matrix_from(j, "mixture_weights"));
}

IntensitySplit split_from_json(const nlohmann::json& j) {
    SquareMatrix m = matrix_from(j, "intensity_split");
    try {
        return IntensitySplit(std::move(m), j.at("lambda").get<double>());
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("malformed intensity_split document: ") + e.what());
    }
}

ModelParams params_from_json(const nlohmann::json& j) {
    try {
        return ModelParams(j.at("lambda").get<double>(), j.value("p", 1.0), j.at("alpha").get<double>(),
                           j.value("epsilon", 1.0));
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument(std::string("malformed model parameters: ") + e.what());
    }
}

}  // namespace ppcorr
