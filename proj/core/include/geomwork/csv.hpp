// csv.hpp — deterministic CSV emission ('.' decimal, ',' delimiter, LF endings,
// 17 significant digits).

#pragma once

#include <cstddef>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>

namespace geomwork::csv {

std::string format_double(double v);
std::string format_optional(const std::optional<double>& v);

class Writer {
public:
    explicit Writer(std::initializer_list<std::string_view> header);

    Writer& cell(double v);
    Writer& cell(const std::optional<double>& v);
    Writer& cell(std::size_t v);
    Writer& cell(std::string_view v);
    void end_row();

    const std::string& str() const { return out_; }

private:
    std::string out_;
    bool row_open_ = false;
    void sep();
};

} // namespace geomwork::csv
