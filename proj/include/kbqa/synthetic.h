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


// A small, fully hand-specified world used by the tests, the acceptance
// checks and the CLI's make-fixture command: knowledge base, parsed
// questions with gold answers, and one short document per topic entity.

#ifndef KBQA_SYNTHETIC_H_
#define KBQA_SYNTHETIC_H_

#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "kbqa/kb.h"
#include "kbqa/linguistics.h"

namespace kbqa {

struct DeskFixture {
  std::vector<Entity> entities;
  std::vector<Triple> triples;
  std::vector<std::tuple<std::string, EntityId, int>> alias_counts;
  std::map<EntityId, std::string> documents;  // ParseDoc text

  std::vector<Question> train;
  std::vector<Question> test;
  std::vector<Question> compositional;  // answers are intersections
  std::vector<Question> suite;          // test + compositional + more held-out

  KBGraph Graph() const { return KBGraph(entities, triples, alias_counts); }
};

// Deterministic; every call returns the same world.
DeskFixture BuildDeskFixture();

// Lays the fixture out under `dir`:
//   kb/{entities,triples,aliases_counts}.tsv
//   {train,test,compositional,suite}.{tsv,conll}
//   corpus/mapping.tsv, corpus/docs/*.txt
//   desk.conf
void WriteDeskFixture(const DeskFixture &fixture, const std::string &dir);

}  // namespace kbqa

#endif  // KBQA_SYNTHETIC_H_
