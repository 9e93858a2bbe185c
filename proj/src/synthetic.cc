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


#include "kbqa/synthetic.h"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>

#include "kbqa/base.h"
#include "kbqa/pipeline.h"

namespace fs = std::filesystem;

namespace kbqa {
namespace {

// Question templates: "surface/lemma/POS/label/head" per token, heads are
// 1-based template positions. "$S/label/head" splices in a name, whose own
// head token takes the label and attachment.
constexpr char kBorn[] = "where/where/WRB/advmod/4 was/be/VBD/auxpass/4 $X/nsubjpass/4 born/bear/VBN/root/0";
constexpr char kFather[] = "who/who/WP/nsubj/2 is/be/VBZ/root/0 $X/poss/4 father/father/NN/attr/2";
constexpr char kMother[] = "who/who/WP/nsubj/2 is/be/VBZ/root/0 $X/poss/4 mother/mother/NN/attr/2";
constexpr char kCapital[] =
    "what/what/WP/attr/2 is/be/VBZ/root/0 the/the/DT/det/4 capital/capital/NN/nsubj/2 of/of/IN/prep/4 $X/pobj/5";
constexpr char kLargest[] =
    "what/what/WP/nsubj/5 is/be/VBZ/cop/5 the/the/DT/det/5 largest/large/JJS/amod/5 nation/nation/NN/root/0 "
    "in/in/IN/prep/5 $X/pobj/6";
constexpr char kLandArea[] =
    "which/which/WDT/det/2 country/country/NN/nsubj/5 in/in/IN/prep/2 $X/pobj/3 has/have/VBZ/root/0 "
    "the/the/DT/det/9 largest/large/JJS/amod/9 land/land/NN/compound/9 area/area/NN/dobj/5";
constexpr char kFirst[] =
    "who/who/WP/dobj/5 did/do/VBD/aux/5 $X/nsubj/5 first/first/RB/advmod/5 play/play/VB/root/0 for/for/IN/prep/5";
constexpr char kTeam[] =
    "what/what/WDT/det/2 team/team/NN/dobj/5 did/do/VBD/aux/5 $X/nsubj/5 play/play/VB/root/0 for/for/IN/prep/5";
constexpr char kJoin[] =
    "what/what/WDT/det/2 year/year/NN/npadvmod/5 did/do/VBD/aux/5 $X/nsubj/5 join/join/VB/root/0 "
    "the/the/DT/det/7 nba/nba/NN/dobj/5";
constexpr char kCollege[] =
    "where/where/WRB/advmod/4 did/do/VBD/aux/4 $X/nsubj/4 go/go/VB/root/0 to/to/TO/prep/4 college/college/NN/pobj/5";
constexpr char kHighSchool[] =
    "where/where/WRB/advmod/4 did/do/VBD/aux/4 $X/nsubj/4 go/go/VB/root/0 to/to/TO/prep/4 high/high/JJ/amod/7 "
    "school/school/NN/pobj/5";
constexpr char kPlays[] = "who/who/WP/nsubj/2 plays/play/VBZ/root/0 $X/dobj/2";
constexpr char kPlaysIn[] = "who/who/WP/nsubj/2 plays/play/VBZ/root/0 in/in/IN/prep/2 $X/pobj/3";
constexpr char kActedIn[] = "who/who/WP/nsubj/2 acted/act/VBD/root/0 in/in/IN/prep/2 $X/pobj/3";
constexpr char kDirected[] = "who/who/WP/nsubj/2 directed/direct/VBD/root/0 $X/dobj/2";
constexpr char kLanguage[] =
    "what/what/WDT/det/2 language/language/NN/dobj/5 do/do/VBP/aux/5 they/they/PRP/nsubj/5 speak/speak/VB/root/0 "
    "in/in/IN/prep/5 $X/pobj/6";
constexpr char kContinent[] =
    "what/what/WDT/det/2 continent/continent/NN/attr/3 is/be/VBZ/root/0 $X/nsubj/3 in/in/IN/prep/3";
constexpr char kPlaysCharIn[] = "who/who/WP/nsubj/2 plays/play/VBZ/root/0 $X/dobj/2 in/in/IN/prep/2 $Y/pobj/4";
constexpr char kActedInBoth[] =
    "who/who/WP/nsubj/2 acted/act/VBD/root/0 in/in/IN/prep/2 $X/pobj/3 and/and/CC/cc/4 $Y/conj/4";

struct NameToken {
  std::string surface;
  std::string pos;
  int head = -1;  // 0-based within the name; -1 marks the name's head
  std::string label;
};
using Name = std::vector<NameToken>;

// Proper-noun compound headed by its last word.
Name Proper(const std::string &surface) {
  auto words = SplitWhitespace(surface);
  Name n;
  for (size_t i = 0; i < words.size(); ++i) {
    bool last = i + 1 == words.size();
    n.push_back({words[i], "NNP", last ? -1 : static_cast<int>(words.size()) - 1, last ? "" : "compound"});
  }
  return n;
}

// "star wars 1": the plural noun heads, the numeral modifies it.
Name Sequel(const std::string &number) {
  return {{"star", "NNP", 1, "compound"}, {"wars", "NNPS", -1, ""}, {number, "NNP", 1, "nummod"}};
}

Name QuestionName(const std::string &surface) {
  if (surface.rfind("star wars ", 0) == 0) return Sequel(surface.substr(10));
  return Proper(surface);
}

Question Build(const std::string &qid, const std::string &tmpl, const std::map<std::string, Name> &slots) {
  struct Part {
    std::vector<std::string> f;
    const Name *name = nullptr;
    int start = 0;  // expanded 1-based index of the first token
    int head_at = 0;
  };
  std::vector<Part> parts;
  int next = 1;
  for (const auto &word : SplitWhitespace(tmpl)) {
    Part p;
    p.f = Split(word, '/');
    p.start = next;
    if (p.f[0][0] == '$') {
      p.name = &slots.at(p.f[0].substr(1));
      for (size_t i = 0; i < p.name->size(); ++i) {
        if ((*p.name)[i].head < 0) p.head_at = next + static_cast<int>(i);
      }
      next += static_cast<int>(p.name->size());
    } else {
      p.head_at = next++;
    }
    parts.push_back(std::move(p));
  }
  std::vector<Token> tokens;
  std::vector<int> heads;
  std::vector<std::string> labels;
  auto attach = [&](const std::string &head) {
    int h = std::stoi(head);
    return h == 0 ? 0 : parts.at(h - 1).head_at;
  };
  for (const auto &p : parts) {
    if (p.name) {
      for (size_t i = 0; i < p.name->size(); ++i) {
        const auto &t = (*p.name)[i];
        tokens.push_back({static_cast<int>(tokens.size()) + 1, t.surface, Lowercase(t.surface), t.pos});
        heads.push_back(t.head < 0 ? attach(p.f[2]) : p.start + t.head);
        labels.push_back(t.head < 0 ? p.f[1] : t.label);
      }
    } else {
      tokens.push_back({static_cast<int>(tokens.size()) + 1, p.f[0], p.f[1], p.f[2]});
      heads.push_back(attach(p.f[4]));
      labels.push_back(p.f[3]);
    }
  }
  return MakeQuestion(qid, DepTree(std::move(tokens), std::move(heads), std::move(labels)));
}

class WorldBuilder {
 public:
  explicit WorldBuilder(DeskFixture *f) : f_(f) {}

  EntityId Add(const std::string &slug, const std::string &name, std::vector<std::string> aliases = {},
               const std::string &description = "") {
    EntityId id = slug.rfind("m.", 0) == 0 ? slug : "m." + slug;
    aliases.insert(aliases.begin(), name);
    f_->entities.push_back(Entity{id, name, aliases, description, false});
    names_[id] = name;
    return id;
  }
  EntityId Mediator() {
    EntityId id = "m.cvt" + std::to_string(++mediators_);
    f_->entities.push_back(Entity{id, "", {}, "", true});
    return id;
  }
  void Edge(const EntityId &s, const std::string &rel, const EntityId &o) {
    f_->triples.push_back(Triple{s, RelationId(rel), o});
  }
  void Count(const std::string &surface, const EntityId &e, int count) {
    f_->alias_counts.emplace_back(surface, e, count);
  }
  void Say(const EntityId &topic, const std::string &sentence) { docs_[topic].push_back(sentence); }
  const std::string &NameOf(const EntityId &id) const { return names_.at(id); }

  void Finish() {
    for (auto &[id, lines] : docs_) f_->documents[id] = Join(lines, "\n") + "\n";
  }

 private:
  DeskFixture *f_;
  std::map<EntityId, std::string> names_;
  std::map<EntityId, std::vector<std::string>> docs_;
  int mediators_ = 0;
};

struct Athlete {
  EntityId id;
  std::string short_name;
  std::vector<std::pair<EntityId, EntityId>> teams;  // (team, year from), in career order
  int drafted = 0;                                     // index of the first NBA team
};

}  // namespace

DeskFixture BuildDeskFixture() {
  DeskFixture f;
  WorldBuilder w(&f);

  // Geography.
  auto usa = w.Add("usa", "United States", {}, "country in north america");
  auto english = w.Add("english", "English", {}, "language");
  w.Edge(usa, "location.country.languages_spoken", english);
  auto dc = w.Add("washington_dc", "Washington D.C.", {"washington"}, "capital city of the united states");
  w.Edge(usa, "location.country.capital", dc);
  w.Say(usa, "Washington D.C. is the capital of the United States .");
  w.Say(usa, "People in the United States speak English .");
  auto city = [&](const std::string &slug, const std::string &name, const EntityId &country,
                  std::vector<std::string> aliases = {}) {
    auto id = w.Add(slug, name, std::move(aliases), "city");
    w.Edge(id, "location.location.containedby", country);
    w.Say(id, name + " is a city in the " + w.NameOf(country) + " .");
    return id;
  };
  w.Edge(dc, "location.location.containedby", usa);
  w.Say(dc, "Washington D.C. is a city in the United States .");
  auto lincoln_ne = city("lincoln_ne", "Lincoln", usa);
  auto jackson_ms = city("jackson_ms", "Jackson", usa);

  struct CountrySpec {
    std::string slug, name, capital_slug, capital, language_slug, language;
    bool largest;
  };
  struct ContinentSpec {
    std::string slug, name;
    std::vector<CountrySpec> countries;
  };
  const std::vector<ContinentSpec> continents = {
      {"europe",
       "Europe",
       {{"russia", "Russia", "moscow", "Moscow", "russian", "Russian", true},
        {"france", "France", "paris", "Paris", "french", "French", false},
        {"germany", "Germany", "berlin", "Berlin", "german", "German", false}}},
      {"asia",
       "Asia",
       {{"china", "China", "beijing", "Beijing", "chinese", "Chinese", true},
        {"japan", "Japan", "tokyo", "Tokyo", "japanese", "Japanese", false},
        {"jordan", "Jordan", "amman", "Amman", "arabic", "Arabic", false}}},
      {"africa",
       "Africa",
       {{"egypt", "Egypt", "cairo", "Cairo", "arabic", "Arabic", true},
        {"nigeria", "Nigeria", "abuja", "Abuja", "english", "English", false},
        {"kenya", "Kenya", "nairobi", "Nairobi", "english", "English", false}}},
  };
  std::set<std::string> languages = {"english"};
  for (const auto &c : continents) {
    auto cont = w.Add(c.slug, c.name, {}, "continent");
    for (const auto &k : c.countries) {
      auto country = w.Add(k.slug, k.name, {}, "country in " + Lowercase(c.name));
      w.Edge(cont, "base.locations.continents.countries_within", country);
      w.Edge(country, "location.country.continent", cont);
      w.Say(cont, k.largest ? k.name + " is the largest country in " + c.name + " by land area ."
                            : k.name + " is a country in " + c.name + " .");
      w.Say(country, k.name + " is located in " + c.name + " .");
      auto capital = w.Add(k.capital_slug, k.capital, {}, "capital city");
      w.Edge(country, "location.country.capital", capital);
      w.Edge(capital, "location.location.containedby", country);
      w.Say(country, k.capital + " is the capital of " + k.name + " .");
      w.Say(capital, k.capital + " is a city in " + k.name + " .");
      if (languages.insert(k.language_slug).second) w.Add(k.language_slug, k.language, {}, "language");
      w.Edge(country, "location.country.languages_spoken", "m." + k.language_slug);
      w.Say(country, "People in " + k.name + " speak " + k.language + " .");
    }
  }

  // People.
  auto person = [&](const std::string &slug, const std::string &name, std::vector<std::string> aliases,
                    const std::string &description, const std::string &intro) {
    auto id = w.Add(slug, name, std::move(aliases), description);
    w.Say(id, intro);
    return id;
  };
  auto born = [&](const EntityId &p, const std::string &short_name, const EntityId &place) {
    w.Edge(p, "people.person.place_of_birth", place);
    w.Say(p, short_name + " was born in " + w.NameOf(place) + " .");
  };
  auto parent = [&](const EntityId &p, const std::string &short_name, const EntityId &par, bool father) {
    w.Edge(p, "people.person.parents", par);
    w.Say(p, short_name + " 's " + (father ? "father" : "mother") + " is " + w.NameOf(par) + " .");
  };
  auto school = [&](const EntityId &p, const std::string &short_name, const EntityId &s, bool college) {
    auto m = w.Mediator();
    w.Edge(p, "people.person.education", m);
    w.Edge(m, "education.education.institution", s);
    w.Say(p, short_name + " went to " + (college ? "college" : "high school") + " at " + w.NameOf(s) + " .");
  };

  auto shaq = person("012xdf", "Shaquille O'Neal", {"shaq"},
                     "american basketball player who would play center for many a team",
                     "Shaquille O'Neal is an American basketball player .");
  auto shaq_fu = w.Add("05n7bp", "Shaq Fu", {"shaq"}, "fighting video game");
  auto shaq_vs = w.Add("06_ttvh", "Shaq Vs.", {"shaq"}, "television programme");
  auto ray = person("ray_allen", "Ray Allen", {}, "american basketball player known to play as a shooting guard",
                    "Ray Allen is an American basketball player .");
  auto mj = person("michael_jordan", "Michael Jordan", {"jordan"},
                   "american basketball player who used to play for the bulls and play for the wizards",
                   "Michael Jordan is an American basketball player .");
  auto lebron = person("lebron_james", "LeBron James", {}, "american basketball player who would play forward",
                       "LeBron James is an American basketball player .");
  auto kobe = person("kobe_bryant", "Kobe Bryant", {}, "american basketball player who would play guard",
                     "Kobe Bryant is an American basketball player .");
  auto emma = person("emma_stone", "Emma Stone", {}, "american actress", "Emma Stone is an American actress .");
  auto jackson = person("michael_jackson", "Michael Jackson", {"jackson"}, "american singer",
                        "Michael Jackson was an American singer .");
  auto steinbeck = person("john_steinbeck", "John Steinbeck", {}, "american writer",
                          "John Steinbeck was an American writer .");
  auto washington = person("george_washington", "George Washington", {"washington"}, "american president",
                           "George Washington was the first American president .");
  auto lincoln = person("abraham_lincoln", "Abraham Lincoln", {"lincoln"}, "american president",
                        "Abraham Lincoln was an American president .");
  (void)shaq_fu;
  (void)shaq_vs;

  born(washington, "Washington", city("westmoreland", "Westmoreland", usa));
  born(lincoln, "Lincoln", city("hodgenville", "Hodgenville", usa));
  born(lebron, "James", city("akron", "Akron", usa));
  born(kobe, "Bryant", city("philadelphia", "Philadelphia", usa));
  born(mj, "Jordan", city("brooklyn", "Brooklyn", usa));
  born(emma, "Stone", city("scottsdale", "Scottsdale", usa));
  born(jackson, "Jackson", city("gary", "Gary", usa));

  parent(kobe, "Bryant", w.Add("joe_bryant", "Joe Bryant", {}, "basketball coach"), true);
  parent(kobe, "Bryant", w.Add("pam_bryant", "Pam Bryant"), false);
  parent(emma, "Stone", w.Add("jeff_stone", "Jeff Stone", {}, "business man"), true);
  parent(emma, "Stone", w.Add("krista_stone", "Krista Stone"), false);
  parent(jackson, "Jackson", w.Add("joe_jackson", "Joe Jackson", {}, "talent manager"), true);
  parent(jackson, "Jackson", w.Add("katherine_jackson", "Katherine Jackson"), false);

  school(steinbeck, "Steinbeck", w.Add("salinas_hs", "Salinas High School", {}, "school"), false);
  school(steinbeck, "Steinbeck", w.Add("stanford", "Stanford University", {}, "university"), true);
  school(mj, "Jordan", w.Add("laney_hs", "Laney High School", {}, "school"), false);
  school(mj, "Jordan", w.Add("unc", "University of North Carolina", {}, "university"), true);
  school(shaq, "O'Neal", w.Add("cole_hs", "Cole High School", {}, "school"), false);
  school(shaq, "O'Neal", w.Add("lsu", "Louisiana State University", {}, "university"), true);
  school(ray, "Allen", w.Add("uconn", "University of Connecticut", {}, "university"), true);
  school(lebron, "James", w.Add("svsm_hs", "St. Vincent-St. Mary High School", {}, "school"), false);

  // Basketball.
  std::map<std::string, EntityId> team;
  for (const auto &[slug, name] : std::vector<std::pair<std::string, std::string>>{
           {"magic", "Orlando Magic"},
           {"lakers", "Los Angeles Lakers"},
           {"miami_heat", "Miami Heat"},
           {"celtics", "Boston Celtics"},
           {"bulls", "Chicago Bulls"},
           {"wizards", "Washington Wizards"},
           {"cavaliers", "Cleveland Cavaliers"},
           {"bucks", "Milwaukee Bucks"},
           {"supersonics", "Seattle SuperSonics"}}) {
    team[slug] = w.Add(slug, name, {}, "basketball team");
  }
  std::map<std::string, EntityId> year;
  for (const char *y : {"1984", "1992", "1996", "2001", "2003", "2004", "2007", "2010", "2012"}) {
    year[y] = w.Add(std::string("y") + y, y, {}, "year");
  }
  const std::vector<Athlete> athletes = {
      {shaq,
       "O'Neal",
       {{team["magic"], year["1992"]},
        {team["lakers"], year["1996"]},
        {team["miami_heat"], year["2004"]},
        {team["celtics"], year["2010"]}},
       0},
      {ray,
       "Allen",
       {{team["bucks"], year["1996"]},
        {team["supersonics"], year["2003"]},
        {team["celtics"], year["2007"]},
        {team["miami_heat"], year["2012"]}},
       0},
      {mj, "Jordan", {{team["bulls"], year["1984"]}, {team["wizards"], year["2001"]}}, 0},
      {lebron, "James", {{team["cavaliers"], year["2003"]}, {team["miami_heat"], year["2010"]}}, 0},
      {kobe, "Bryant", {{team["lakers"], year["1996"]}}, 0},
  };
  for (const auto &a : athletes) {
    for (size_t i = 0; i < a.teams.size(); ++i) {
      const auto &[t, y] = a.teams[i];
      auto m = w.Mediator();
      w.Edge(a.id, "sports.pro_athlete.teams", m);
      w.Edge(m, "sports.sports_team_roster.team", t);
      w.Edge(m, "sports.sports_team_roster.from", y);
      if (static_cast<int>(i) == a.drafted) {
        w.Say(a.id, a.short_name + " was drafted by the " + w.NameOf(t) + " with the first overall pick .");
        w.Say(a.id, a.short_name + " joined the nba in " + w.NameOf(y) + " .");
      } else {
        w.Say(a.id, a.short_name + " played for the " + w.NameOf(t) + " .");
        w.Say(a.id, a.short_name + " changed teams in " + w.NameOf(y) + " .");
      }
    }
  }

  // Film.
  auto sw1 = w.Add("sw1", "Star Wars Episode I", {"star wars 1", "the phantom menace"}, "science fiction film");
  auto sw2 = w.Add("sw2", "Star Wars Episode II", {"star wars 2", "attack of the clones"}, "science fiction film");
  auto heat = w.Add("heat_film", "Heat", {}, "crime film");
  auto ronin = w.Add("ronin", "Ronin", {}, "action film");
  auto lucas = w.Add("george_lucas", "George Lucas", {}, "film director");
  auto mann = w.Add("michael_mann", "Michael Mann", {}, "film director");
  auto frankenheimer = w.Add("john_frankenheimer", "John Frankenheimer", {}, "film director");
  for (const auto &[film, director] :
       std::vector<std::pair<EntityId, EntityId>>{{sw1, lucas}, {sw2, lucas}, {heat, mann}, {ronin, frankenheimer}}) {
    w.Edge(film, "film.film.directed_by", director);
    w.Say(film, w.NameOf(film) + " is a film .");
    w.Say(film, w.NameOf(film) + " was directed by " + w.NameOf(director) + " .");
  }
  std::map<std::string, EntityId> actor, role;
  for (const auto &[slug, name] : std::vector<std::pair<std::string, std::string>>{
           {"jake_lloyd", "Jake Lloyd"},
           {"hayden_christensen", "Hayden Christensen"},
           {"ewan_mcgregor", "Ewan McGregor"},
           {"liam_neeson", "Liam Neeson"},
           {"robert_de_niro", "Robert De Niro"},
           {"al_pacino", "Al Pacino"},
           {"jean_reno", "Jean Reno"}}) {
    actor[slug] = w.Add(slug, name, {}, "actor");
  }
  for (const auto &[slug, name] : std::vector<std::pair<std::string, std::string>>{
           {"anakin", "Anakin Skywalker"},
           {"obi_wan", "Obi-Wan Kenobi"},
           {"qui_gon", "Qui-Gon Jinn"},
           {"mccauley", "Neil McCauley"},
           {"hanna", "Vincent Hanna"},
           {"sam", "Sam"},
           {"vincent", "Vincent"}}) {
    role[slug] = w.Add(slug, name, {}, "fictional character");
  }
  const std::vector<std::tuple<EntityId, std::string, std::string>> performances = {
      {sw1, "jake_lloyd", "anakin"},          {sw1, "ewan_mcgregor", "obi_wan"},
      {sw1, "liam_neeson", "qui_gon"},        {sw2, "hayden_christensen", "anakin"},
      {sw2, "ewan_mcgregor", "obi_wan"},      {heat, "robert_de_niro", "mccauley"},
      {heat, "al_pacino", "hanna"},           {ronin, "robert_de_niro", "sam"},
      {ronin, "jean_reno", "vincent"},
  };
  for (const auto &[film, a, r] : performances) {
    auto m = w.Mediator();
    w.Edge(film, "film.film.starring", m);
    w.Edge(m, "film.performance.film", film);
    w.Edge(m, "film.performance.actor", actor[a]);
    w.Edge(m, "film.performance.character", role[r]);
    w.Edge(role[r], "film.film_character.portrayed_in_films", m);
    w.Edge(actor[a], "film.actor.film", m);
    w.Say(film, w.NameOf(actor[a]) + " starred in " + w.NameOf(film) + " .");
    w.Say(film, w.NameOf(role[r]) + " is a character in " + w.NameOf(film) + " .");
    w.Say(role[r], w.NameOf(role[r]) + " was portrayed by " + w.NameOf(actor[a]) + " .");
    w.Say(role[r], w.NameOf(role[r]) + " appears in the film " + w.NameOf(film) + " .");
    w.Say(actor[a], w.NameOf(actor[a]) + " acted in " + w.NameOf(film) + " .");
  }

  // Popularity: the place outranks the person for every shared surname.
  w.Count("shaq", shaq, 30);
  w.Count("shaq", shaq_fu, 3);
  w.Count("shaq", shaq_vs, 2);
  w.Count("jordan", "m.jordan", 60);
  w.Count("jordan", mj, 40);
  w.Count("washington", dc, 50);
  w.Count("washington", washington, 30);
  w.Count("lincoln", lincoln_ne, 40);
  w.Count("lincoln", lincoln, 35);
  w.Count("jackson", jackson_ms, 40);
  w.Count("jackson", jackson, 30);
  w.Finish();

  // Questions.
  int serial = 0;
  auto ask = [&](std::vector<Question> *out, const std::string &tmpl, const std::string &x,
                 const std::vector<EntityId> &gold, const EntityId &topic, const std::string &y = "") {
    std::map<std::string, Name> slots = {{"X", QuestionName(x)}};
    if (!y.empty()) slots["Y"] = QuestionName(y);
    char qid[32];
    std::snprintf(qid, sizeof qid, "desk-%03d", ++serial);
    Question q = Build(qid, tmpl, slots);
    q.gold_answers = EntitySet(gold.begin(), gold.end());
    if (!topic.empty()) q.gold_topic = topic;
    out->push_back(std::move(q));
  };
  auto T = [&](const std::string &slug) { return team.at(slug); };
  auto Y = [&](const std::string &y) { return year.at(y); };
  auto A = [&](const std::string &slug) { return actor.at(slug); };
  auto R = [&](const std::string &slug) { return role.at(slug); };

  auto *train = &f.train;
  ask(train, kBorn, "washington", {"m.westmoreland"}, washington);
  ask(train, kBorn, "lincoln", {"m.hodgenville"}, lincoln);
  ask(train, kBorn, "lebron james", {"m.akron"}, lebron);
  ask(train, kBorn, "kobe bryant", {"m.philadelphia"}, kobe);
  ask(train, kFather, "jackson", {"m.joe_jackson"}, jackson);
  ask(train, kFather, "kobe bryant", {"m.joe_bryant"}, kobe);
  ask(train, kMother, "kobe bryant", {"m.pam_bryant"}, kobe);
  ask(train, kMother, "michael jackson", {"m.katherine_jackson"}, jackson);
  ask(train, kCapital, "france", {"m.paris"}, "m.france");
  ask(train, kCapital, "germany", {"m.berlin"}, "m.germany");
  ask(train, kCapital, "china", {"m.beijing"}, "m.china");
  ask(train, kCapital, "egypt", {"m.cairo"}, "m.egypt");
  ask(train, kLargest, "asia", {"m.china"}, "m.asia");
  ask(train, kLargest, "africa", {"m.egypt"}, "m.africa");
  ask(train, kLandArea, "asia", {"m.china"}, "m.asia");
  ask(train, kFirst, "lebron james", {T("cavaliers")}, lebron);
  ask(train, kFirst, "michael jordan", {T("bulls")}, mj);
  ask(train, kTeam, "lebron james", {T("cavaliers"), T("miami_heat")}, lebron);
  ask(train, kTeam, "ray allen", {T("bucks"), T("supersonics"), T("celtics"), T("miami_heat")}, ray);
  ask(train, kFirst, "ray allen", {T("bucks")}, ray);
  ask(train, kJoin, "shaq", {Y("1992")}, shaq);
  ask(train, kJoin, "lebron james", {Y("2003")}, lebron);
  ask(train, kJoin, "michael jordan", {Y("1984")}, mj);
  ask(train, kCollege, "michael jordan", {"m.unc"}, mj);
  ask(train, kCollege, "shaq", {"m.lsu"}, shaq);
  ask(train, kHighSchool, "lebron james", {"m.svsm_hs"}, lebron);
  ask(train, kHighSchool, "michael jordan", {"m.laney_hs"}, mj);
  ask(train, kPlays, "qui-gon jinn", {A("liam_neeson")}, R("qui_gon"));
  ask(train, kPlays, "neil mccauley", {A("robert_de_niro")}, R("mccauley"));
  ask(train, kPlays, "vincent hanna", {A("al_pacino")}, R("hanna"));
  ask(train, kPlaysIn, "star wars 2", {A("hayden_christensen"), A("ewan_mcgregor")}, sw2);
  ask(train, kActedIn, "heat", {A("robert_de_niro"), A("al_pacino")}, heat);
  ask(train, kActedIn, "ronin", {A("robert_de_niro"), A("jean_reno")}, ronin);
  ask(train, kDirected, "heat", {mann}, heat);
  ask(train, kDirected, "ronin", {frankenheimer}, ronin);
  ask(train, kLanguage, "france", {"m.french"}, "m.france");
  ask(train, kLanguage, "china", {"m.chinese"}, "m.china");
  ask(train, kLanguage, "egypt", {"m.arabic"}, "m.egypt");
  ask(train, kContinent, "russia", {"m.europe"}, "m.russia");
  ask(train, kContinent, "nigeria", {"m.africa"}, "m.nigeria");

  auto *test = &f.test;
  ask(test, kFirst, "shaq", {T("magic")}, shaq);
  ask(test, kJoin, "ray allen", {Y("1996")}, ray);
  ask(test, kLargest, "europe", {"m.russia"}, "m.europe");
  ask(test, kFather, "emma stone", {"m.jeff_stone"}, emma);
  ask(test, kCollege, "john steinbeck", {"m.stanford"}, steinbeck);
  ask(test, kTeam, "jordan", {T("bulls"), T("wizards")}, mj);
  ask(test, kCapital, "japan", {"m.tokyo"}, "m.japan");
  ask(test, kBorn, "michael jordan", {"m.brooklyn"}, mj);
  ask(test, kDirected, "star wars 1", {lucas}, sw1);
  ask(test, kPlays, "anakin skywalker", {A("jake_lloyd"), A("hayden_christensen")}, R("anakin"));

  auto *comp = &f.compositional;
  ask(comp, kPlaysCharIn, "anakin skywalker", {A("jake_lloyd")}, "", "star wars 1");
  ask(comp, kPlaysCharIn, "anakin skywalker", {A("hayden_christensen")}, "", "star wars 2");
  ask(comp, kPlaysCharIn, "obi-wan kenobi", {A("ewan_mcgregor")}, "", "star wars 1");
  ask(comp, kPlaysCharIn, "obi-wan kenobi", {A("ewan_mcgregor")}, "", "star wars 2");
  ask(comp, kPlaysCharIn, "qui-gon jinn", {A("liam_neeson")}, "", "star wars 1");
  ask(comp, kPlaysCharIn, "neil mccauley", {A("robert_de_niro")}, "", "heat");
  ask(comp, kPlaysCharIn, "vincent", {A("jean_reno")}, "", "ronin");
  ask(comp, kActedInBoth, "heat", {A("robert_de_niro")}, "", "ronin");
  ask(comp, kActedInBoth, "star wars 1", {A("ewan_mcgregor")}, "", "star wars 2");
  ask(comp, kActedInBoth, "ronin", {A("robert_de_niro")}, "", "heat");

  std::vector<Question> more;
  ask(&more, kCapital, "russia", {"m.moscow"}, "m.russia");
  ask(&more, kCapital, "nigeria", {"m.abuja"}, "m.nigeria");
  ask(&more, kCapital, "kenya", {"m.nairobi"}, "m.kenya");
  ask(&more, kCapital, "jordan", {"m.amman"}, "m.jordan");
  ask(&more, kLanguage, "japan", {"m.japanese"}, "m.japan");
  ask(&more, kLanguage, "russia", {"m.russian"}, "m.russia");
  ask(&more, kLanguage, "jordan", {"m.arabic"}, "m.jordan");
  ask(&more, kContinent, "france", {"m.europe"}, "m.france");
  ask(&more, kContinent, "china", {"m.asia"}, "m.china");
  ask(&more, kMother, "emma stone", {"m.krista_stone"}, emma);
  ask(&more, kFather, "michael jackson", {"m.joe_jackson"}, jackson);
  ask(&more, kBorn, "emma stone", {"m.scottsdale"}, emma);
  ask(&more, kTeam, "shaq", {T("magic"), T("lakers"), T("miami_heat"), T("celtics")}, shaq);
  ask(&more, kJoin, "kobe bryant", {Y("1996")}, kobe);
  ask(&more, kHighSchool, "shaq", {"m.cole_hs"}, shaq);
  ask(&more, kTeam, "kobe bryant", {T("lakers")}, kobe);
  ask(&more, kDirected, "star wars 2", {lucas}, sw2);
  ask(&more, kActedIn, "star wars 1", {A("jake_lloyd"), A("ewan_mcgregor"), A("liam_neeson")}, sw1);
  ask(&more, kPlays, "obi-wan kenobi", {A("ewan_mcgregor")}, R("obi_wan"));
  ask(&more, kLandArea, "europe", {"m.russia"}, "m.europe");

  f.suite = f.test;
  f.suite.insert(f.suite.end(), f.compositional.begin(), f.compositional.end());
  f.suite.insert(f.suite.end(), more.begin(), more.end());
  return f;
}

void WriteDeskFixture(const DeskFixture &fixture, const std::string &dir) {
  fs::path root(dir);
  fs::create_directories(root / "kb");
  fs::create_directories(root / "corpus" / "docs");
  auto open = [](const fs::path &p) {
    std::ofstream out(p);
    if (!out) throw Error("cannot write " + p.string());
    return out;
  };
  {
    auto out = open(root / "kb" / "entities.tsv");
    for (const auto &e : fixture.entities) {
      out << e.id << '\t' << e.name << '\t' << Join(e.aliases, "|") << '\t' << (e.is_mediator ? 1 : 0) << '\t'
          << e.description << '\n';
    }
  }
  fixture.Graph().SaveTriples((root / "kb" / "triples.tsv").string());
  {
    auto out = open(root / "kb" / "aliases_counts.tsv");
    for (const auto &[surface, e, count] : fixture.alias_counts) out << surface << '\t' << e << '\t' << count << '\n';
  }
  {
    auto mapping = open(root / "corpus" / "mapping.tsv");
    for (const auto &[id, text] : fixture.documents) {
      std::string file = "docs/" + id.substr(2) + ".txt";
      mapping << id << '\t' << file << '\n';
      open(root / "corpus" / file) << text;
    }
  }
  SaveDataset((root / "train.tsv").string(), fixture.train);
  SaveDataset((root / "test.tsv").string(), fixture.test);
  SaveDataset((root / "compositional.tsv").string(), fixture.compositional);
  SaveDataset((root / "suite.tsv").string(), fixture.suite);
  open(root / "desk.conf") << "# Desk-scale world; paths are relative to this file.\n"
                              "kb = kb\n"
                              "train_questions = train.tsv\n"
                              "test_questions = test.tsv\n"
                              "corpus = corpus/mapping.tsv\n"
                              "model_dir = models\n"
                              "# Every training question is needed; nothing is held out.\n"
                              "dev_fraction = 0\n"
                              "seed = 1\n";
}

}  // namespace kbqa
