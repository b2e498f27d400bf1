#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace dickehp {

using Cell = std::variant<double, std::int64_t, std::string>;

// One output record; keys keep insertion order so that rows produced by the
// same builder share a column layout.
struct SweepRow {
    std::vector<std::pair<std::string, Cell>> cells;

    void set(const std::string& key, Cell value);
    [[nodiscard]] const Cell* find(const std::string& key) const;
    // Numeric value of a double or integer cell; DomainError otherwise.
    [[nodiscard]] double number(const std::string& key) const;
    [[nodiscard]] std::string text(const std::string& key) const;
    [[nodiscard]] std::vector<std::string> keys() const;
};

}  // namespace dickehp
