#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>

#include "pi4/error.hpp"
#include "pi4/heap.hpp"

using namespace pi4;

namespace {

HeaderTable two_field_table() {
  HeaderTable t;
  t.types["hdr_t"] = {{"f", 4}, {"g", 2}};
  t.instances["hdr"] = "hdr_t";
  t.instance_order.push_back("hdr");
  return t;
}

Bits bits(const std::string& s) { return *Bits::from_string(s); }

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Pi4Error& e) {
    return e.kind();
  }
  return ErrorKind::Internal;
}

} // namespace

TEST_CASE("bit string slicing is half-open") {
  Bits bv = bits("1010");
  CHECK(bv.slice(1, 4) == bits("010"));
  CHECK(bv.slice(0, 1) == bits("1"));
  CHECK(bv.slice(1, 4).size() == 3);
}

TEST_CASE("literal widths") {
  CHECK(Bits::parse_literal("0b0101")->size() == 4);
  CHECK(*Bits::parse_literal("0b0101") == bits("0101"));
  CHECK(Bits::parse_literal("0x0800")->size() == 16);
  CHECK(*Bits::parse_literal("0x0800") == bits("0000100000000000"));
  CHECK(Bits::parse_literal("0x1") ->size() == 4);
  CHECK(!Bits::parse_literal("0b012").has_value());
  CHECK(!Bits::parse_literal("12").has_value());
}

TEST_CASE("uint round trip keeps MSB-first order") {
  CHECK(Bits::from_uint(6, 3) == bits("110"));
  CHECK(bits("110").to_uint() == 6);
  CHECK(Bits::from_uint(0, 2) == bits("00"));
}

TEST_CASE("concat_heaps follows the definition") {
  Heap h1{bits("10"), Bits{}, {}};
  Heap h2{bits("01"), bits("1"), {{"A", bits("11")}}};
  Heap got = concat_heaps(h1, h2);
  CHECK(got.in == bits("1001"));
  CHECK(got.out == bits("1"));
  CHECK(got.insts.at("A") == bits("11"));
}

TEST_CASE("concat_heaps rejects overlapping instances") {
  Heap h1{Bits{}, Bits{}, {{"A", bits("10")}}};
  Heap h2{Bits{}, Bits{}, {{"A", bits("11")}}};
  CHECK(kind_of([&] { concat_heaps(h1, h2); }) ==
        ErrorKind::OverlappingInstances);
}

TEST_CASE("concat_heaps right identity") {
  Heap h{bits("101"), bits("0"), {{"A", bits("11")}}};
  Heap empty;
  CHECK(concat_heaps(h, empty) == h);
  CHECK(concat_heaps(empty, h) == h);
}

TEST_CASE("deserialize splits the instance prefix") {
  HeaderTable t = two_field_table();
  // I = 110011 . B with B = 01: value covers f=1100, g=11.
  auto [value, rest] = deserialize(t, "hdr", bits("11001101"));
  CHECK(value == bits("110011"));
  CHECK(rest == bits("01"));

  auto [v2, r2] = deserialize(t, "hdr", bits("110011"));
  CHECK(v2 == bits("110011"));
  CHECK(r2.empty());

  CHECK(kind_of([&] { deserialize(t, "hdr", bits("1")); }) ==
        ErrorKind::Underflow);
}

TEST_CASE("serialize is plain concatenation of the stored bits") {
  HeaderTable t = two_field_table();
  // {f=1100, g=11} -> 110011 (six bits for the six-bit header).
  CHECK(serialize(t, "hdr", bits("110011")) == bits("110011"));
  CHECK(kind_of([&] { serialize(t, "hdr", bits("110")); }) ==
        ErrorKind::WidthMismatch);

  HeaderTable small;
  small.types["a_t"] = {{"f", 2}};
  small.instances["a"] = "a_t";
  small.instance_order.push_back("a");
  CHECK(serialize(small, "a", bits("01")) == bits("01"));
}

TEST_CASE("serialize undoes deserialize on the consumed prefix") {
  HeaderTable t = two_field_table();
  Bits input = bits("01101101");
  auto [value, rest] = deserialize(t, "hdr", input);
  CHECK(serialize(t, "hdr", value).concat(rest) == input);
}

TEST_CASE("init_value is all zeros") {
  HeaderTable t = two_field_table();
  CHECK(init_value(t, "hdr") == bits("000000"));
  HeaderTable one;
  one.types["w1"] = {{"b", 1}};
  one.instances["x"] = "w1";
  one.instance_order.push_back("x");
  CHECK(init_value(one, "x") == bits("0"));
}

TEST_CASE("semantic_chomp drops a pkt_in prefix only") {
  Heap h{bits("1010"), bits("11"), {{"A", bits("0")}}};
  Heap got = semantic_chomp(h, 1);
  CHECK(got.in == bits("010"));
  CHECK(got.out == h.out);
  CHECK(got.insts == h.insts);
  CHECK(semantic_chomp(h, 0) == h);
  CHECK(kind_of([&] { semantic_chomp(h, 5); }) == ErrorKind::Underflow);
}

TEST_CASE("semantic_chomp unrolls") {
  Heap h{bits("110100"), Bits{}, {}};
  for (size_t n = 0; n + 1 <= h.in.size(); ++n) {
    CHECK(semantic_chomp(semantic_chomp(h, n), 1) == semantic_chomp(h, n + 1));
  }
}

TEST_CASE("concat_heaps associativity where defined") {
  Heap a{bits("1"), Bits{}, {{"A", bits("0")}}};
  Heap b{bits("0"), bits("1"), {{"B", bits("1")}}};
  Heap c{Bits{}, bits("0"), {{"C", bits("10")}}};
  CHECK(concat_heaps(concat_heaps(a, b), c) ==
        concat_heaps(a, concat_heaps(b, c)));
}

TEST_CASE("field ranges use cumulative offsets") {
  HeaderTable t = two_field_table();
  auto f = t.field_range("hdr", "f");
  auto g = t.field_range("hdr", "g");
  REQUIRE(f.has_value());
  REQUIRE(g.has_value());
  CHECK(*f == std::pair<size_t, size_t>{0, 4});
  CHECK(*g == std::pair<size_t, size_t>{4, 6});
  CHECK(!t.field_range("hdr", "missing").has_value());
  CHECK(t.sizeof_inst("hdr") == 6);
}
