// tests/event_io_test.cc

// Copyright 2026  The strongcrowd Authors

// See ../../COPYING for clarification regarding multiple authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "strongcrowd/errors.h"
#include "strongcrowd/event_io.h"

using namespace strongcrowd;

TEST_CASE("tsv round trip with header and ms rounding") {
  std::vector<EventInstance> ev{{"f", "dog_bark", 1.23456, 2.5, std::nullopt},
                                {"f", "siren", 0.0, 10.0, std::nullopt}};
  OutputHeader h{"generate", 3, "abc"};
  std::stringstream ss;
  WriteEventTsv(ss, ev, &h);
  const std::string text = ss.str();
  CHECK(text.rfind("# strongcrowd stage=generate seed=3 config=abc\n", 0) == 0);
  CHECK(text.find("1.235\t2.500\tdog_bark") != std::string::npos);
  auto back = ReadEventTsv(ss, "f");
  REQUIRE(back.size() == 2);
  CHECK(back[0].onset == 1.235);
  CHECK(back[1].label == "siren");
}

TEST_CASE("tsv reader accepts whitespace separation and skips comments") {
  std::istringstream in("# comment\n\n0.5 1.5 car_horn\n2\t3\tsiren\r\n");
  auto ev = ReadEventTsv(in, "x");
  REQUIRE(ev.size() == 2);
  CHECK(ev[0].file_id == "x");
  CHECK(ev[0].offset == 1.5);
  CHECK(ev[1].label == "siren");
}

TEST_CASE("tsv reader rejects malformed lines") {
  std::istringstream bad_time("0.5\tabc\tdog\n");
  CHECK_THROWS_AS(ReadEventTsv(bad_time, "x"), InputError);
  std::istringstream few("0.5\t1.0\n");
  CHECK_THROWS_AS(ReadEventTsv(few, "x"), InputError);
  std::istringstream inverted("2\t1\tdog\n");
  CHECK_THROWS_AS(ReadEventTsv(inverted, "x"), InputError);
}

TEST_CASE("jsonl round trip keeps salience and file ids") {
  std::vector<EventInstance> ev{{"a", "dog_bark", 1.0, 2.0, 0.25},
                                {"b", "siren", 3.0, 4.0, std::nullopt}};
  std::stringstream ss;
  OutputHeader h{"generate", 1, "ff"};
  WriteEventJsonl(ss, ev, &h);
  CHECK(ss.str().rfind("{\"header\":", 0) == 0);
  auto back = ReadEventJsonl(ss);
  CHECK(back == ev);
  std::istringstream bad("{\"file\":\"a\",\"onset\":1}\n");
  CHECK_THROWS_AS(ReadEventJsonl(bad), InputError);
}

TEST_CASE("LoadEvents picks the format by extension") {
  const auto dir = std::filesystem::temp_directory_path() / "sc_event_io_test";
  std::filesystem::create_directories(dir);
  {
    std::ofstream(dir / "clip7.tsv") << "1\t2\tdog_bark\n";
    std::ofstream(dir / "all.jsonl")
        << "{\"file\":\"z\",\"onset\":1,\"offset\":2,\"class\":\"siren\"}\n";
  }
  auto tsv = LoadEvents(dir / "clip7.tsv");
  REQUIRE(tsv.size() == 1);
  CHECK(tsv[0].file_id == "clip7");
  auto js = LoadEvents(dir / "all.jsonl");
  REQUIRE(js.size() == 1);
  CHECK(js[0].file_id == "z");
  CHECK_THROWS_AS(LoadEvents(dir / "missing.tsv"), InputError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("IsSkippableLine and FormatTime") {
  CHECK(IsSkippableLine(""));
  CHECK(IsSkippableLine("  # x"));
  CHECK(IsSkippableLine("{\"header\":{}}"));
  CHECK_FALSE(IsSkippableLine("1\t2\tA"));
  CHECK(FormatTime(1.0) == "1.000");
  CHECK(RoundToMs(0.0005) == 0.001);
}
