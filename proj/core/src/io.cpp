#include "regrepair/io.hpp"

#include "regrepair/errors.hpp"

#include <fstream>
#include <sstream>

namespace regrepair {

namespace fs = std::filesystem;

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise(Errc::IoFailure, "cannot open " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text_file(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) raise(Errc::IoFailure, "cannot write " + path.string());
    out << content;
    if (!out) raise(Errc::IoFailure, "short write to " + path.string());
}

void copy_tree(const fs::path& from, const fs::path& to) {
    if (!dir_empty_or_absent(to))
        raise(Errc::NonEmptyDestination, to.string() + " already exists and is not empty");
    std::error_code ec;
    fs::create_directories(to, ec);
    fs::copy(from, to, fs::copy_options::recursive | fs::copy_options::copy_symlinks, ec);
    if (ec) raise(Errc::IoFailure, "copy " + from.string() + " -> " + to.string() + ": " + ec.message());
}

bool dir_empty_or_absent(const fs::path& path) {
    std::error_code ec;
    if (!fs::exists(path, ec)) return true;
    if (!fs::is_directory(path, ec)) return false;
    return fs::directory_iterator(path, ec) == fs::directory_iterator();
}

}  // namespace regrepair
