#include "rigidlab/demo_configs.hpp"

namespace rigidlab {

const std::vector<std::pair<std::string, std::string>>& demo_configs() {
  static const std::vector<std::pair<std::string, std::string>> configs = {
      {"ladder_ginibre",
       "experiment = ladder\n"
       "measure = gaussian_power\n"
       "a = 0\n"
       "b = 1\n"
       "c = 2\n"
       "j = 64\n"
       "master_seed = 1\n"
       "output_dir = out/ladder_ginibre\n"
       "emit = csv,json\n"},
      {"ladder_bergman",
       "experiment = ladder\n"
       "measure = disk_uniform\n"
       "radius = 1\n"
       "j = 64\n"
       "master_seed = 1\n"
       "output_dir = out/ladder_bergman\n"
       "emit = csv,json\n"},
      {"classify_ginibre",
       "experiment = classify\n"
       "measure = gaussian_power\n"
       "a = 0\n"
       "b = 1\n"
       "c = 2\n"
       "j = 256\n"
       "abs_continuous = true\n"
       "master_seed = 1\n"
       "output_dir = out/classify_ginibre\n"
       "emit = csv,json\n"},
      {"classify_bergman",
       "experiment = classify\n"
       "measure = disk_uniform\n"
       "radius = 1\n"
       "j = 256\n"
       "abs_continuous = true\n"
       "master_seed = 1\n"
       "output_dir = out/classify_bergman\n"
       "emit = csv,json\n"},
      {"sample_gaf",
       "experiment = sample_gaf\n"
       "alpha_list = 0.4,0.5,1.0\n"
       "window_radius = 3\n"
       "tail_tol = 1e-12\n"
       "replicas = 2\n"
       "master_seed = 7\n"
       "output_dir = out/sample_gaf\n"
       "emit = csv,json,svg\n"},
      {"sample_dpp",
       "experiment = sample_dpp\n"
       "measure = gaussian_power\n"
       "rank = 64\n"
       "replicas = 2\n"
       "master_seed = 7\n"
       "output_dir = out/sample_dpp\n"
       "emit = csv,json,svg\n"},
      {"sample_lattice",
       "experiment = sample_lattice\n"
       "beta = 0.75\n"
       "m = 64\n"
       "symmetric = true\n"
       "replicas = 2\n"
       "master_seed = 7\n"
       "output_dir = out/sample_lattice\n"
       "emit = csv,json,svg\n"},
      {"variance_sweep_lattice",
       "experiment = variance_sweep\n"
       "target = lattice\n"
       "beta = 0.25\n"
       "eps = 1\n"
       "l_list = 8,16,32,64,128\n"
       "master_seed = 1\n"
       "output_dir = out/variance_sweep_lattice\n"
       "emit = csv,json\n"},
      {"variance_sweep_gaf",
       "experiment = variance_sweep\n"
       "target = gaf\n"
       "alpha = 0.5\n"
       "r0 = 1.25\n"
       "eps = 1\n"
       "k = 0\n"
       "mode = bound\n"
       "l_list = 8,16,32,64,128\n"
       "master_seed = 1\n"
       "output_dir = out/variance_sweep_gaf\n"
       "emit = csv,json\n"},
      {"palm_sweep_bergman",
       "experiment = palm_sweep\n"
       "measure = disk_uniform\n"
       "radius = 1\n"
       "n_list = 8,16,32\n"
       "replicas = 500\n"
       "master_seed = 11\n"
       "output_dir = out/palm_sweep_bergman\n"
       "emit = csv,json\n"},
      {"kakutani_beta1",
       "experiment = kakutani_sweep\n"
       "beta = 1\n"
       "k_max = 10000\n"
       "master_seed = 1\n"
       "output_dir = out/kakutani_beta1\n"
       "emit = csv,json\n"},
      {"kakutani_beta04",
       "experiment = kakutani_sweep\n"
       "beta = 0.4\n"
       "k_max = 100000\n"
       "master_seed = 1\n"
       "output_dir = out/kakutani_beta04\n"
       "emit = csv,json\n"},
      {"recover_dpp",
       "experiment = recover\n"
       "process = dpp\n"
       "measure = gaussian_power\n"
       "rank = 64\n"
       "r0 = 1\n"
       "k_max = 0\n"
       "certificate_delta = 1e-3\n"
       "j_max = 1024\n"
       "replicas = 50\n"
       "master_seed = 5\n"
       "output_dir = out/recover_dpp\n"
       "emit = csv,json\n"},
      {"appendix_demos",
       "experiment = appendix_demos\n"
       "master_seed = 1\n"
       "output_dir = out/appendix_demos\n"
       "emit = json\n"},
      {"mixture_demo",
       "experiment = mixture_demo\n"
       "measure = gaussian_power\n"
       "rank = 1\n"
       "weak_index = 1\n"
       "weak_value = 0.5\n"
       "replicas = 500\n"
       "master_seed = 3\n"
       "output_dir = out/mixture_demo\n"
       "emit = csv,json\n"},
  };
  return configs;
}

const std::string* find_demo_config(const std::string& name) {
  for (const auto& [n, text] : demo_configs())
    if (n == name) return &text;
  return nullptr;
}

}  // namespace rigidlab
