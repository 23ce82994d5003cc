#include "ptp/fab.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

namespace ptp {
namespace {

FlowName
flow(const char* uri)
{
  return FlowName(Name::parse(uri));
}

class FabTest : public ::testing::Test
{
protected:
  FabTest()
  {
    handle = fib.insert(Name::parse("/x"), {1});
  }

  void
  insert(Fab& fab, const char* uri)
  {
    fab.insert(flow(uri), handle, fib);
    fab.checkInvariants();
  }

  Fib fib;
  Fib::Handle handle;
};

TEST_F(FabTest, InsertThenLookup)
{
  Fib f;
  auto e = f.insert(Name::parse("/amazon"), {3});
  Fab fab;
  fab.insert(flow("/amazon/BBB"), e, f);
  auto hit = fab.lookup(flow("/amazon/BBB"), f);
  ASSERT_TRUE(hit);
  EXPECT_EQ(*hit, e);
  EXPECT_EQ(fab.stats().hits, 1);
}

TEST_F(FabTest, EmptyMisses)
{
  Fab fab;
  EXPECT_FALSE(fab.lookup(flow("/x/a"), fib));
  EXPECT_EQ(fab.stats().misses, 1);
}

TEST_F(FabTest, TouchProtectsFromEviction)
{
  Fab fab(2);
  insert(fab, "/x/A");
  insert(fab, "/x/B");
  EXPECT_TRUE(fab.lookup(flow("/x/A"), fib));
  auto evicted = fab.insert(flow("/x/C"), handle, fib);
  ASSERT_TRUE(evicted);
  EXPECT_EQ(*evicted, flow("/x/B"));
  EXPECT_TRUE(fab.contains(flow("/x/A")));
  EXPECT_TRUE(fab.contains(flow("/x/C")));
  fab.checkInvariants();
}

TEST_F(FabTest, EvictsOldestWithoutTouches)
{
  Fab fab(2);
  insert(fab, "/x/A");
  insert(fab, "/x/B");
  EXPECT_EQ(fab.insert(flow("/x/C"), handle, fib), flow("/x/A"));
}

TEST_F(FabTest, CapacityOne)
{
  Fab fab(1);
  insert(fab, "/x/A");
  insert(fab, "/x/B");
  EXPECT_FALSE(fab.lookup(flow("/x/A"), fib));
  EXPECT_EQ(fab.size(), 1);
}

TEST_F(FabTest, CapacityThreeTouchMiddle)
{
  Fab fab(3);
  insert(fab, "/x/A");
  insert(fab, "/x/B");
  insert(fab, "/x/C");
  EXPECT_TRUE(fab.lookup(flow("/x/B"), fib));
  EXPECT_EQ(fab.insert(flow("/x/D"), handle, fib), flow("/x/A"));
  std::vector<FlowName> expected = {flow("/x/D"), flow("/x/B"), flow("/x/C")};
  EXPECT_EQ(fab.recencyOrder(), expected);
}

TEST_F(FabTest, ReinsertTouches)
{
  Fab fab(2);
  insert(fab, "/x/A");
  insert(fab, "/x/B");
  EXPECT_FALSE(fab.insert(flow("/x/A"), handle, fib));
  EXPECT_EQ(fab.insert(flow("/x/C"), handle, fib), flow("/x/B"));
}

TEST_F(FabTest, Erase)
{
  Fab fab(4);
  insert(fab, "/x/A");
  EXPECT_TRUE(fab.erase(flow("/x/A")));
  EXPECT_FALSE(fab.erase(flow("/x/A")));
  EXPECT_EQ(fab.size(), 0);
  fab.checkInvariants();
}

TEST(Fab, ZeroCapacityRejected)
{
  EXPECT_THROW(Fab(0), std::invalid_argument);
}

TEST(Resolve, SecondCallHits)
{
  Fib fib;
  fib.insert(Name::parse("/a"), {1});
  Fab fab;
  Name n = Name::parse("/a/b/1");
  const FibEntry* first = resolve(fib, fab, n);
  EXPECT_EQ(first, oracle::lpmLinear(fib, n));
  EXPECT_EQ(fab.stats().misses, 1);
  EXPECT_EQ(resolve(fib, fab, Name::parse("/a/b/2")), first);
  EXPECT_EQ(fab.stats().hits, 1);
}

TEST(Resolve, ErasedEntryIsNotServed)
{
  Fib fib;
  fib.insert(Name::parse("/a"), {1});
  fib.insert(Name::parse("/a/b"), {2});
  Fab fab;
  EXPECT_EQ(resolve(fib, fab, Name::parse("/a/b/1"))->prefix.toUri(), "/a/b");
  fib.erase(Name::parse("/a/b"));
  EXPECT_EQ(resolve(fib, fab, Name::parse("/a/b/2"))->prefix.toUri(), "/a");
  EXPECT_EQ(fab.stats().invalidations, 1);
}

TEST(Resolve, ModifiedEntryIsRefreshed)
{
  Fib fib;
  fib.insert(Name::parse("/a"), {1});
  Fab fab;
  resolve(fib, fab, Name::parse("/a/b/1"));
  fib.insert(Name::parse("/a"), {5});
  EXPECT_EQ(resolve(fib, fab, Name::parse("/a/b/2"))->faces, std::vector<FaceId>{5});
}

TEST(Resolve, LongerPrefixAddedLater)
{
  Fib fib;
  fib.insert(Name::parse("/a"), {1});
  Fab fab;
  resolve(fib, fab, Name::parse("/a/b/1"));
  fib.insert(Name::parse("/a/b"), {2});
  EXPECT_EQ(resolve(fib, fab, Name::parse("/a/b/2"))->prefix.toUri(), "/a/b");
}

TEST(Resolve, RandomAgainstLinearScan)
{
  std::mt19937_64 rng(5);
  for (std::size_t capacity : {1u, 16u, 1024u}) {
    Fib fib;
    Fab fab(capacity);
    for (int i = 0; i < 30; ++i) {
      fib.insert(oracle::randomName(rng, 0, 3), {static_cast<FaceId>(1 + i % 3)});
    }
    for (int q = 0; q < 10000; ++q) {
      if (q % 500 == 0) {
        Name p = oracle::randomName(rng, 0, 3);
        if (rng() % 2) {
          fib.erase(p);
        }
        else {
          fib.insert(p, {9});
        }
      }
      Name n = oracle::randomName(rng, 2, 5);
      ASSERT_EQ(resolve(fib, fab, n), oracle::lpmLinear(fib, n)) << n.toUri();
    }
    fab.checkInvariants();
    EXPECT_LE(fab.size(), capacity);
  }
}

} // namespace
} // namespace ptp
