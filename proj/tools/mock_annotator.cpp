// Stand-in external annotator for tests and demos. Writes result.json into the
// output directory and optionally copies prepared SEG files next to it.

#include "CLI11.hpp"
#include "json.hpp"

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

auto main(int argc, char** argv) -> int {
    CLI::App app{"mock annotator"};
    std::string input;
    std::string output;
    std::vector<std::string> structures;
    std::string body_part;
    std::string series_uid;
    std::string stderr_text;
    std::vector<std::string> copies;
    int exit_code = 0;
    int sleep_ms = 0;
    bool malformed = false;
    bool no_result = false;
    app.add_option("--input", input)->required();
    app.add_option("--output", output)->required();
    app.add_option("--structures", structures)->delimiter(',');
    app.add_option("--body-part", body_part);
    app.add_option("--series-uid", series_uid, "defaults to CURATOR_SERIES_UID");
    app.add_option("--stderr", stderr_text);
    app.add_option("--copy", copies, "file copied into the output directory");
    app.add_option("--exit-code", exit_code);
    app.add_option("--sleep-ms", sleep_ms);
    app.add_flag("--malformed", malformed, "write a result.json that is not JSON");
    app.add_flag("--no-result", no_result);
    CLI11_PARSE(app, argc, argv);

    if (!stderr_text.empty()) std::cerr << stderr_text << '\n';
    if (sleep_ms > 0) std::this_thread::sleep_for(std::chrono::milliseconds(sleep_ms));
    if (exit_code != 0) return exit_code;

    std::size_t inputs = 0;
    for (const auto& e : std::filesystem::directory_iterator(input)) inputs += e.is_regular_file() ? 1 : 0;
    if (inputs == 0) {
        std::cerr << "no input files in " << input << '\n';
        return 3;
    }
    const char* env_out = std::getenv("CURATOR_OUTPUT_DIR");
    if (env_out == nullptr || std::filesystem::path(env_out) != std::filesystem::path(output)) {
        std::cerr << "CURATOR_OUTPUT_DIR does not match --output\n";
        return 4;
    }
    if (series_uid.empty()) {
        const char* env_uid = std::getenv("CURATOR_SERIES_UID");
        series_uid = env_uid != nullptr ? env_uid : "";
    }
    for (const auto& c : copies) {
        const std::filesystem::path src(c);
        std::filesystem::copy_file(src, std::filesystem::path(output) / src.filename(),
                                   std::filesystem::copy_options::overwrite_existing);
    }
    if (no_result) return 0;
    std::ofstream out(std::filesystem::path(output) / "result.json");
    if (malformed) {
        out << "{\"structures\": [\"liver\"";
        return 0;
    }
    nlohmann::json j = {{"series_uid", series_uid}, {"structures", structures}, {"inputs", inputs}};
    j["body_part"] = body_part.empty() ? nlohmann::json(nullptr) : nlohmann::json(body_part);
    out << j.dump() << '\n';
    return 0;
}
