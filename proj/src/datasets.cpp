#include "tsshap/datasets.hpp"

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"
#include "json.hpp"
#include <openssl/evp.h>
#include <zlib.h>

#include "tsshap/error.hpp"

namespace tsshap {

namespace {

struct DatasetSpec {
    const char* name;
    const char* url;
    const char* kind;        // "csv" | "zip"
    const char* zip_member;  // for zip archives
    const char* mirror_file;
};

constexpr DatasetSpec kDatasets[] = {
    {"us-unemployment", "https://fred.stlouisfed.org/graph/fredgraph.csv?id=UNRATE", "csv", "",
     "us-unemployment.csv"},
    {"bike-sharing", "https://archive.ics.uci.edu/static/public/275/bike+sharing+dataset.zip",
     "zip", "day.csv", "bike-sharing.zip"},
    {"peyton-manning",
     "https://raw.githubusercontent.com/facebook/prophet/main/examples/"
     "example_wp_log_peyton_manning.csv",
     "csv", "", "peyton-manning.csv"},
};

const DatasetSpec& spec_for(const std::string& name) {
    for (const auto& s : kDatasets)
        if (name == s.name) return s;
    fail(ErrorCode::ConfigInvalid, "unknown dataset '" + name + "' (try: us-unemployment, "
                                   "bike-sharing, peyton-manning)");
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
        cells.push_back(cell);
    }
    return cells;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> lines;
    std::stringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) lines.push_back(line);
    }
    return lines;
}

std::uint32_t read_u32(const std::string& b, std::size_t off) {
    return static_cast<std::uint8_t>(b[off]) | (static_cast<std::uint8_t>(b[off + 1]) << 8) |
           (static_cast<std::uint8_t>(b[off + 2]) << 16) |
           (static_cast<std::uint8_t>(b[off + 3]) << 24);
}

std::uint16_t read_u16(const std::string& b, std::size_t off) {
    return static_cast<std::uint16_t>(static_cast<std::uint8_t>(b[off]) |
                                      (static_cast<std::uint8_t>(b[off + 1]) << 8));
}

std::string inflate_raw(const std::string& compressed, std::size_t expected) {
    std::string out(expected, '\0');
    z_stream zs;
    std::memset(&zs, 0, sizeof(zs));
    require(inflateInit2(&zs, -15) == Z_OK, ErrorCode::FetchFailed, "zlib init failed");
    zs.next_in = reinterpret_cast<Bytef*>(const_cast<char*>(compressed.data()));
    zs.avail_in = static_cast<uInt>(compressed.size());
    zs.next_out = reinterpret_cast<Bytef*>(out.data());
    zs.avail_out = static_cast<uInt>(out.size());
    const int rc = inflate(&zs, Z_FINISH);
    inflateEnd(&zs);
    require(rc == Z_STREAM_END, ErrorCode::FetchFailed, "zip member failed to inflate");
    out.resize(zs.total_out);
    return out;
}

}  // namespace

std::vector<std::string> dataset_names() {
    std::vector<std::string> names;
    for (const auto& s : kDatasets) names.emplace_back(s.name);
    return names;
}

std::string dataset_mirror_filename(const std::string& name) { return spec_for(name).mirror_file; }

std::string sha256_hex(const std::string& bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned int i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 0xf];
    }
    return out;
}

std::string http_get(const std::string& url) {
    const auto scheme_end = url.find("://");
    require(scheme_end != std::string::npos, ErrorCode::FetchFailed, "bad URL '" + url + "'");
    const auto path_start = url.find('/', scheme_end + 3);
    const std::string base = path_start == std::string::npos ? url : url.substr(0, path_start);
    const std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

    httplib::Client client(base);
    client.set_follow_location(true);
    client.set_connection_timeout(15, 0);
    client.set_read_timeout(120, 0);
    auto res = client.Get(path);
    require(res != nullptr, ErrorCode::FetchFailed,
            "request to " + url + " failed: " + httplib::to_string(res.error()));
    require(res->status == 200, ErrorCode::FetchFailed,
            "request to " + url + " returned HTTP " + std::to_string(res->status));
    return res->body;
}

std::string zip_extract_member(const std::string& zip, const std::string& member) {
    // End-of-central-directory record, scanned from the back.
    require(zip.size() >= 22, ErrorCode::FetchFailed, "zip archive too small");
    std::size_t eocd = std::string::npos;
    for (std::size_t i = zip.size() - 22; i + 4 >= 4; --i) {
        if (read_u32(zip, i) == 0x06054b50) {
            eocd = i;
            break;
        }
        if (i == 0) break;
    }
    require(eocd != std::string::npos, ErrorCode::FetchFailed, "zip central directory not found");
    const std::uint16_t n_entries = read_u16(zip, eocd + 10);
    std::size_t off = read_u32(zip, eocd + 16);

    for (int e = 0; e < n_entries; ++e) {
        require(off + 46 <= zip.size() && read_u32(zip, off) == 0x02014b50, ErrorCode::FetchFailed,
                "corrupt zip central directory");
        const std::uint16_t method = read_u16(zip, off + 10);
        const std::uint32_t comp_size = read_u32(zip, off + 20);
        const std::uint32_t raw_size = read_u32(zip, off + 24);
        const std::uint16_t name_len = read_u16(zip, off + 28);
        const std::uint16_t extra_len = read_u16(zip, off + 30);
        const std::uint16_t comment_len = read_u16(zip, off + 32);
        const std::uint32_t local_off = read_u32(zip, off + 42);
        const std::string name = zip.substr(off + 46, name_len);
        off += 46 + name_len + extra_len + comment_len;

        // match by exact name or basename (archives sometimes nest a folder)
        const auto slash = name.find_last_of('/');
        const std::string basename = slash == std::string::npos ? name : name.substr(slash + 1);
        if (name != member && basename != member) continue;

        require(read_u32(zip, local_off) == 0x04034b50, ErrorCode::FetchFailed,
                "corrupt zip local header");
        const std::uint16_t lname = read_u16(zip, local_off + 26);
        const std::uint16_t lextra = read_u16(zip, local_off + 28);
        const std::size_t data_off = local_off + 30 + lname + lextra;
        require(data_off + comp_size <= zip.size(), ErrorCode::FetchFailed, "truncated zip data");
        const std::string data = zip.substr(data_off, comp_size);
        if (method == 0) return data;  // stored
        if (method == 8) return inflate_raw(data, raw_size);
        fail(ErrorCode::FetchFailed, "unsupported zip compression method " +
                                         std::to_string(method) + " for '" + member + "'");
    }
    fail(ErrorCode::FetchFailed, "zip archive has no member '" + member + "'");
}

namespace {

std::string normalize_two_column(const std::string& raw, const std::string& what) {
    const auto lines = lines_of(raw);
    require(lines.size() >= 2, ErrorCode::FetchFailed, what + ": no data rows");
    std::string out = "timestamp,value\n";
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto cells = split_line(lines[i]);
        require(cells.size() >= 2, ErrorCode::FetchFailed, what + ": ragged row");
        if (cells[1].empty() || cells[1] == ".") continue;  // FRED encodes gaps as '.'
        out += cells[0] + "," + cells[1] + "\n";
    }
    return out;
}

std::string normalize_bike_sharing(const std::string& raw) {
    const auto lines = lines_of(raw);
    require(!lines.empty(), ErrorCode::FetchFailed, "bike-sharing: empty csv");
    const auto header = split_line(lines[0]);
    auto col = [&](const char* name) {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return i;
        fail(ErrorCode::FetchFailed, std::string("bike-sharing: column '") + name + "' missing");
    };
    const std::size_t c_date = col("dteday"), c_cnt = col("cnt"), c_weather = col("weathersit"),
                      c_temp = col("temp"), c_hum = col("hum"), c_wind = col("windspeed");
    std::string out = "timestamp,cnt,weathersit,temp,hum,windspeed\n";
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto cells = split_line(lines[i]);
        if (cells.size() < header.size()) continue;
        out += cells[c_date] + "," + cells[c_cnt] + "," + cells[c_weather] + "," + cells[c_temp] +
               "," + cells[c_hum] + "," + cells[c_wind] + "\n";
    }
    return out;
}

}  // namespace

std::string normalize_dataset(const std::string& name, const std::string& raw) {
    if (name == "us-unemployment") return normalize_two_column(raw, name);
    if (name == "peyton-manning") return normalize_two_column(raw, name);
    if (name == "bike-sharing") return normalize_bike_sharing(raw);
    fail(ErrorCode::ConfigInvalid, "unknown dataset '" + name + "'");
}

std::string fetch_dataset(const std::string& name, const std::string& dir, std::string mirror) {
    const DatasetSpec& spec = spec_for(name);
    std::filesystem::create_directories(dir);
    const std::string csv_path = dir + "/" + name + ".csv";
    const std::string lock_path = dir + "/datasets.lock.json";

    if (mirror.empty()) {
        if (const char* env = std::getenv("TSSHAP_DATASET_MIRROR")) mirror = env;
    }
    std::string url = spec.url;
    if (!mirror.empty()) {
        if (mirror.back() == '/') mirror.pop_back();
        url = mirror + "/" + spec.mirror_file;
    }

    std::string raw = http_get(url);
    if (std::string(spec.kind) == "zip") raw = zip_extract_member(raw, spec.zip_member);
    const std::string csv = normalize_dataset(name, raw);
    const std::string digest = sha256_hex(csv);

    nlohmann::json lock = nlohmann::json::object();
    if (std::ifstream in(lock_path); in.good()) in >> lock;
    if (lock.contains(name)) {
        require(lock.at(name).get<std::string>() == digest, ErrorCode::ChecksumMismatch,
                "dataset '" + name + "' changed upstream: pinned " +
                    lock.at(name).get<std::string>() + ", fetched " + digest);
    } else {
        lock[name] = digest;
        std::ofstream out(lock_path);
        require(out.good(), ErrorCode::InputUnreadable, "cannot write '" + lock_path + "'");
        out << lock.dump(2) << "\n";
    }

    std::ofstream out(csv_path);
    require(out.good(), ErrorCode::InputUnreadable, "cannot write '" + csv_path + "'");
    out << csv;
    return csv_path;
}

}  // namespace tsshap
