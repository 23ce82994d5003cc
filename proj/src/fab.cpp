#include "ptp/fab.hpp"

#include <bit>
#include <functional>
#include <stdexcept>

namespace ptp {

Fab::Fab(std::size_t capacity)
  : m_capacity(capacity)
{
  if (capacity == 0) {
    throw std::invalid_argument("FAB capacity must be positive");
  }
  m_tuples.resize(capacity);
  m_free.reserve(capacity);
  for (std::size_t i = capacity; i-- > 0;) {
    m_free.push_back(static_cast<std::int32_t>(i));
  }
  // keep chains short: at least two buckets per tuple
  m_buckets.assign(std::bit_ceil(capacity * 2), NIL);
}

std::uint64_t
Fab::hashOf(const FlowName& flow)
{
  return std::hash<std::string>{}(flow.toUri());
}

std::int32_t
Fab::find(const FlowName& flow, std::uint64_t hash) const
{
  for (auto idx = m_buckets[bucketOf(hash)]; idx != NIL; idx = m_tuples[idx].chainNext) {
    const Tuple& t = m_tuples[idx];
    if (t.hash == hash && t.key == flow) {
      return idx;
    }
  }
  return NIL;
}

void
Fab::unlinkList(std::int32_t idx)
{
  Tuple& t = m_tuples[idx];
  if (t.prev != NIL) {
    m_tuples[t.prev].next = t.next;
  }
  else {
    m_head = t.next;
  }
  if (t.next != NIL) {
    m_tuples[t.next].prev = t.prev;
  }
  else {
    m_tail = t.prev;
  }
  t.prev = t.next = NIL;
}

void
Fab::pushFront(std::int32_t idx)
{
  Tuple& t = m_tuples[idx];
  t.prev = NIL;
  t.next = m_head;
  if (m_head != NIL) {
    m_tuples[m_head].prev = idx;
  }
  m_head = idx;
  if (m_tail == NIL) {
    m_tail = idx;
  }
}

void
Fab::unlinkChain(std::int32_t idx)
{
  auto& head = m_buckets[bucketOf(m_tuples[idx].hash)];
  if (head == idx) {
    head = m_tuples[idx].chainNext;
  }
  else {
    auto cur = head;
    while (m_tuples[cur].chainNext != idx) {
      cur = m_tuples[cur].chainNext;
    }
    m_tuples[cur].chainNext = m_tuples[idx].chainNext;
  }
  m_tuples[idx].chainNext = NIL;
}

void
Fab::release(std::int32_t idx)
{
  unlinkChain(idx);
  unlinkList(idx);
  m_tuples[idx] = Tuple{};
  m_free.push_back(idx);
  --m_size;
}

std::optional<Fib::Handle>
Fab::lookup(const FlowName& flow, const Fib& fib)
{
  auto hash = hashOf(flow);
  auto idx = find(flow, hash);
  if (idx == NIL) {
    ++m_stats.misses;
    return std::nullopt;
  }
  if (fib.get(m_tuples[idx].entry) == nullptr || m_tuples[idx].fibEpoch != fib.insertEpoch()) {
    release(idx);
    ++m_stats.invalidations;
    ++m_stats.misses;
    return std::nullopt;
  }
  ++m_stats.hits;
  if (m_head != idx) {
    unlinkList(idx);
    pushFront(idx);
  }
  return m_tuples[idx].entry;
}

std::optional<FlowName>
Fab::insert(const FlowName& flow, Fib::Handle entry, const Fib& fib)
{
  auto fibEpoch = fib.insertEpoch();
  auto hash = hashOf(flow);
  if (auto idx = find(flow, hash); idx != NIL) {
    m_tuples[idx].entry = entry;
    m_tuples[idx].fibEpoch = fibEpoch;
    unlinkList(idx);
    pushFront(idx);
    return std::nullopt;
  }

  std::optional<FlowName> evicted;
  if (m_size == m_capacity) {
    auto victim = m_tail;
    evicted = m_tuples[victim].key;
    release(victim);
    ++m_stats.evictions;
  }

  auto idx = m_free.back();
  m_free.pop_back();
  Tuple& t = m_tuples[idx];
  t.key = flow;
  t.hash = hash;
  t.entry = entry;
  t.fibEpoch = fibEpoch;
  t.used = true;
  auto& head = m_buckets[bucketOf(hash)];
  t.chainNext = head;
  head = idx;
  pushFront(idx);
  ++m_size;
  ++m_stats.insertions;
  return evicted;
}

bool
Fab::erase(const FlowName& flow)
{
  auto idx = find(flow, hashOf(flow));
  if (idx == NIL) {
    return false;
  }
  release(idx);
  return true;
}

bool
Fab::contains(const FlowName& flow) const
{
  return find(flow, hashOf(flow)) != NIL;
}

std::vector<FlowName>
Fab::recencyOrder() const
{
  std::vector<FlowName> out;
  out.reserve(m_size);
  for (auto idx = m_head; idx != NIL; idx = m_tuples[idx].next) {
    out.push_back(m_tuples[idx].key);
  }
  return out;
}

void
Fab::checkInvariants() const
{
  if (m_size > m_capacity) {
    throw std::logic_error("FAB size exceeds capacity");
  }

  std::vector<int> seenInChain(m_tuples.size(), 0);
  std::size_t chained = 0;
  for (std::size_t b = 0; b < m_buckets.size(); ++b) {
    for (auto idx = m_buckets[b]; idx != NIL; idx = m_tuples[idx].chainNext) {
      const Tuple& t = m_tuples[idx];
      if (!t.used) {
        throw std::logic_error("free tuple reachable from hash chain");
      }
      if (bucketOf(t.hash) != b || t.hash != hashOf(t.key)) {
        throw std::logic_error("tuple in wrong bucket");
      }
      if (++seenInChain[idx] > 1 || ++chained > m_size) {
        throw std::logic_error("hash chain revisits a tuple");
      }
    }
  }
  if (chained != m_size) {
    throw std::logic_error("hash table tuple count differs from size");
  }

  std::size_t listed = 0;
  auto prev = NIL;
  for (auto idx = m_head; idx != NIL; idx = m_tuples[idx].next) {
    const Tuple& t = m_tuples[idx];
    if (!t.used || seenInChain[idx] != 1) {
      throw std::logic_error("list element does not point at exactly one hashed tuple");
    }
    if (t.prev != prev) {
      throw std::logic_error("broken back link in recency list");
    }
    if (++listed > m_size) {
      throw std::logic_error("recency list longer than hash table");
    }
    prev = idx;
  }
  if (listed != m_size || prev != m_tail) {
    throw std::logic_error("recency list length differs from hash table size");
  }
}

const FibEntry*
resolve(const Fib& fib, Fab& fab, const Name& name)
{
  // a prefix as long as the name itself depends on the sequence component, which
  // a flow-keyed cache cannot represent
  if (name.size() < 2 || fib.maxPrefixLength() >= name.size()) {
    auto h = fib.longestPrefixMatch(name);
    return h ? fib.get(*h) : nullptr;
  }
  auto flow = flowNameOf(name);
  if (auto cached = fab.lookup(flow, fib)) {
    return fib.get(*cached);
  }
  auto h = fib.longestPrefixMatch(name);
  if (!h) {
    return nullptr;
  }
  fab.insert(flow, *h, fib);
  return fib.get(*h);
}

} // namespace ptp
