/*
Copyright 2026 The Plancraft Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#pragma once

#include <iostream>
#include <string>
#include <vector>

namespace plancraft::cli {

/// Exit codes: 0 success, 1 domain failure (invalid project, stalemate,
/// infeasible staffing), 2 usage error.
int cli_main(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr,
             std::istream& in = std::cin);

}  // namespace plancraft::cli
