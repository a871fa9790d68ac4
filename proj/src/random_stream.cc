//
// Copyright 2026 The dpmean Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "dpmean/random_stream.h"

namespace dpmean {

RandomStream DeriveStream(uint64_t seed, uint64_t stream_id) {
  return RandomStream{.seed = seed, .stream_id = stream_id};
}

StreamCursor::StreamCursor(const RandomStream& stream)
    : key_(Mix64(stream.seed ^ Mix64(stream.stream_id ^ kStreamSalt))) {}

}  // namespace dpmean
