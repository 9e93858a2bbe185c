// Copyright 2026 The KBQA Authors.
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


// The desk world written to a scratch directory and trained once per test
// binary.

#ifndef KBQA_TESTS_DESK_H_
#define KBQA_TESTS_DESK_H_

#include <chrono>
#include <memory>

#include "kbqa/pipeline.h"
#include "kbqa/synthetic.h"
#include "test_util.h"

namespace kbqa::testing {

struct Desk {
  TempDir dir;
  DeskFixture fixture;
  Config config;
  System system;
  double train_seconds = 0;
};

inline const Desk &TrainedDesk() {
  static const std::unique_ptr<Desk> desk = [] {
    auto d = std::make_unique<Desk>();
    d->fixture = BuildDeskFixture();
    WriteDeskFixture(d->fixture, d->dir.str());
    d->config = Config::Load(d->dir.Path("desk.conf"));
    auto start = std::chrono::steady_clock::now();
    TrainAll(d->config);
    d->train_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    d->system = LoadSystem(d->config);
    return d;
  }();
  return *desk;
}

}  // namespace kbqa::testing

#endif  // KBQA_TESTS_DESK_H_
