#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

// Typed cursor over a parsed JSON config. Every accessor failure names the
// full dotted path of the offending field so a bad config is diagnosable
// from the error message alone.

namespace qfltool {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

class Node {
  public:
    Node(const nlohmann::json& j, std::string path) : j_(&j), path_(std::move(path)) {}

    const nlohmann::json& raw() const { return *j_; }
    const std::string& path() const { return path_; }

    bool has(const std::string& key) const { return j_->is_object() && j_->contains(key); }

    Node at(const std::string& key) const {
        if (!j_->is_object()) throw ConfigError(path_ + ": expected an object");
        const auto it = j_->find(key);
        if (it == j_->end())
            throw ConfigError(path_ + ": missing required field \"" + key + "\"");
        return {*it, path_ + "." + key};
    }

    std::size_t size() const {
        if (!j_->is_array()) throw ConfigError(path_ + ": expected an array");
        return j_->size();
    }

    Node item(std::size_t i) const {
        if (!j_->is_array()) throw ConfigError(path_ + ": expected an array");
        if (i >= j_->size())
            throw ConfigError(path_ + ": index " + std::to_string(i) + " out of range");
        return {(*j_)[i], path_ + "[" + std::to_string(i) + "]"};
    }

    double as_double() const {
        if (!j_->is_number()) throw ConfigError(path_ + ": expected a number");
        return j_->get<double>();
    }

    std::int64_t as_int() const {
        if (!j_->is_number_integer())
            throw ConfigError(path_ + ": expected an integer");
        return j_->get<std::int64_t>();
    }

    std::uint64_t as_uint() const {
        const std::int64_t v = as_int();
        if (v < 0) throw ConfigError(path_ + ": expected a non-negative integer");
        return static_cast<std::uint64_t>(v);
    }

    bool as_bool() const {
        if (!j_->is_boolean()) throw ConfigError(path_ + ": expected a boolean");
        return j_->get<bool>();
    }

    std::string as_string() const {
        if (!j_->is_string()) throw ConfigError(path_ + ": expected a string");
        return j_->get<std::string>();
    }

    std::vector<double> as_double_vector() const {
        std::vector<double> out;
        out.reserve(size());
        for (std::size_t i = 0; i < size(); ++i) out.push_back(item(i).as_double());
        return out;
    }

    std::vector<std::uint64_t> as_uint_vector() const {
        std::vector<std::uint64_t> out;
        out.reserve(size());
        for (std::size_t i = 0; i < size(); ++i) out.push_back(item(i).as_uint());
        return out;
    }

    std::vector<std::vector<double>> as_matrix() const {
        std::vector<std::vector<double>> out;
        out.reserve(size());
        for (std::size_t i = 0; i < size(); ++i) out.push_back(item(i).as_double_vector());
        return out;
    }

    // With-default getters; the key may be absent but a present key of the
    // wrong type is still an error.
    double number_or(const std::string& key, double fallback) const {
        return has(key) ? at(key).as_double() : fallback;
    }
    std::uint64_t uint_or(const std::string& key, std::uint64_t fallback) const {
        return has(key) ? at(key).as_uint() : fallback;
    }
    int int_or(const std::string& key, int fallback) const {
        return has(key) ? static_cast<int>(at(key).as_int()) : fallback;
    }
    bool bool_or(const std::string& key, bool fallback) const {
        return has(key) ? at(key).as_bool() : fallback;
    }
    std::string string_or(const std::string& key, const std::string& fallback) const {
        return has(key) ? at(key).as_string() : fallback;
    }

  private:
    const nlohmann::json* j_;
    std::string path_;
};

inline nlohmann::json parse_config_text(const std::string& text, const std::string& label) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(label + ": " + e.what());
    }
}

}  // namespace qfltool
