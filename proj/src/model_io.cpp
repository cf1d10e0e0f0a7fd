#include "pacf/model_io.hpp"

#include <array>
#include <charconv>

#include "pacf/error.hpp"

namespace pacf {

namespace {

Scalar scalar_from_json(const nlohmann::json& v, std::string_view field) {
    if (v.is_string()) {
        return Scalar::parse(v.get<std::string>());
    }
    if (v.is_number_integer()) {
        return Scalar(mpq_class(v.dump()));
    }
    if (v.is_number_float()) {
        std::array<char, 64> buf{};
        const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v.get<double>());
        return Scalar::parse(std::string_view(buf.data(), static_cast<std::size_t>(res.ptr - buf.data())));
    }
    throw Error(ErrorCode::InvalidInput, "model field '" + std::string(field) + "' must hold numbers or strings");
}

std::vector<Scalar> array_from_json(const nlohmann::json& doc, const char* field) {
    if (!doc.contains(field)) {
        return {};
    }
    const auto& arr = doc.at(field);
    if (!arr.is_array()) {
        throw Error(ErrorCode::InvalidInput, std::string("model field '") + field + "' must be an array");
    }
    std::vector<Scalar> out;
    for (const auto& v : arr) {
        out.push_back(scalar_from_json(v, field));
    }
    return out;
}

nlohmann::json array_to_json(const std::vector<Scalar>& values) {
    auto out = nlohmann::json::array();
    for (const auto& v : values) {
        out.push_back(Scalar(v.to_rational()).to_string());
    }
    return out;
}

}  // namespace

ArmaModel model_from_json(const nlohmann::json& doc) {
    if (!doc.is_object()) {
        throw Error(ErrorCode::InvalidInput, "model spec must be a JSON object");
    }
    if (doc.contains("model") && doc.at("model").is_object()) {
        return model_from_json(doc.at("model"));
    }
    if (!doc.contains("sigma2")) {
        throw Error(ErrorCode::InvalidInput, "model spec is missing 'sigma2'");
    }
    return {array_from_json(doc, "ar"), array_from_json(doc, "ma"), scalar_from_json(doc.at("sigma2"), "sigma2")};
}

ArmaModel parse_model_spec(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::InvalidInput, std::string("model spec is not valid JSON: ") + e.what());
    }
    return model_from_json(doc);
}

nlohmann::json model_to_json(const ArmaModel& model) {
    return {{"ar", array_to_json(model.ar())},
            {"ma", array_to_json(model.ma())},
            {"sigma2", Scalar(model.sigma2().to_rational()).to_string()}};
}

std::vector<Scalar> parse_coefficient_list(std::string_view text) {
    std::vector<Scalar> out;
    if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) {
        return out;
    }
    std::size_t start = 0;
    while (true) {
        const auto comma = text.find(',', start);
        out.push_back(Scalar::parse(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start)));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

}  // namespace pacf
