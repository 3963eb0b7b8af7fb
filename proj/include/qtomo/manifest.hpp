#pragma once

#include "qtomo/phantom.hpp"
#include "qtomo/pipeline.hpp"

#include <optional>
#include <string>

namespace qtomo {

/// Full run description loaded from a JSON manifest. The manifest is the
/// authority; the CLI may fill fields the manifest leaves out, but an
/// explicit flag that contradicts an explicit manifest value aborts.
struct Manifest {
    std::string strategy = "single_stage"; // single_stage | multi_stage | sparse_view
    ReconstructConfig config;
    StagePlan plan; // multi_stage only

    // input: a sinogram file, or an image/phantom projected at `angles`
    std::optional<PhantomMode> phantom_mode;
    int phantom_size = 0;
    std::string image_path;
    std::string sinogram_path;
    int projection_angles = 0;

    // reference image for the accuracy report
    bool reference_is_phantom = false;
    std::string reference_image_path;

    std::string output_dir = "out";

    // which overridable fields the manifest set explicitly
    bool has_seed = false;
    bool has_backend = false;
    bool has_time_limit = false;
    bool has_output_dir = false;
};

Manifest load_manifest(const std::string& path);
Manifest parse_manifest(const std::string& json_text);

/// Echo of the effective configuration, written next to the outputs so
/// runs are archivable.
std::string manifest_echo_json(const Manifest& manifest);

} // namespace qtomo
