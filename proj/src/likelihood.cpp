// Copyright 2026 The PMI Channel Estimation Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "pmi/likelihood.hpp"

namespace pmi {

std::string to_string(MleInit init) {
  switch (init) {
    case MleInit::kIdentity: return "identity";
    case MleInit::kRandomStiefel: return "random";
    case MleInit::kSpectral: return "spectral";
    case MleInit::kExplicit: return "explicit";
  }
  return "unknown";
}

std::string to_string(StopReason reason) {
  switch (reason) {
    case StopReason::kMaxIters: return "max-iters";
    case StopReason::kRelChange: return "rel-change";
    case StopReason::kStationary: return "stationary";
  }
  return "unknown";
}

MleInit parse_mle_init(const std::string& name) {
  if (name == "identity") return MleInit::kIdentity;
  if (name == "random" || name == "random-stiefel") return MleInit::kRandomStiefel;
  if (name == "spectral") return MleInit::kSpectral;
  if (name == "explicit") return MleInit::kExplicit;
  throw ArgumentError("unknown initialization '" + name + "'");
}

}  // namespace pmi
