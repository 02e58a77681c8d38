// Copyright 2026 The nl2fol Authors.
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

#ifndef NL2FOL_UTIL_SUBPROCESS_H_
#define NL2FOL_UTIL_SUBPROCESS_H_

#include <chrono>
#include <optional>
#include <string>
#include <vector>

namespace nl2fol {

struct ProcessResult {
  bool started = false;  // false if the executable could not be spawned
  bool timed_out = false;
  int exit_code = -1;    // valid when the child exited normally
  int term_signal = 0;   // nonzero when the child was killed by a signal
  std::string stdout_text;
  std::string stderr_text;
  std::chrono::duration<double> wall_time{0};
};

// Runs argv[0] (PATH lookup) in its own process group with stdin
// redirected from /dev/null.
// On timeout the whole group gets SIGKILL. The child is always reaped
// before returning, and the group is killed even on normal exit so that
// no descendants outlive the call.
ProcessResult RunProcess(const std::vector<std::string>& argv,
                         std::chrono::duration<double> timeout);

// Resolves `name` against PATH unless it contains a slash. Returns the path
// of an executable regular file, or nullopt.
std::optional<std::string> FindExecutable(const std::string& name);

// Writes `contents` to a fresh file under $TMPDIR (or /tmp) and removes it
// on destruction.
class TempFile {
 public:
  TempFile(const std::string& contents, const std::string& suffix);
  ~TempFile();
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;

  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

}  // namespace nl2fol

#endif  // NL2FOL_UTIL_SUBPROCESS_H_
