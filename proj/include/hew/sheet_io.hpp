#ifndef HEW_SHEET_IO_HPP
#define HEW_SHEET_IO_HPP

#include <iosfwd>
#include <stdexcept>
#include <string>

#include "hew/bifurcation.hpp"

namespace hew {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// File carries a different schema tag than the one this build writes.
struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// File is unreadable as the expected format (truncated, malformed, or
// missing required fields).
struct CorruptFileError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr const char* kSheetSchema = "hew-sheet/1";

std::string sheet_to_json(const Sheet& sheet);
Sheet sheet_from_json(const std::string& text);

void save_sheet(const Sheet& sheet, const std::string& path);
Sheet load_sheet(const std::string& path);

// One row per solved grid point: i, j, t1, t2, lambda1, lambda2,
// residual_norm, newton_iters, then the leading cosine coefficients.
// Doubles are printed with %.17g so the text round-trips exactly.
std::string sheet_to_csv(const Sheet& sheet, int n_coeffs = 8);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

}  // namespace hew

#endif
