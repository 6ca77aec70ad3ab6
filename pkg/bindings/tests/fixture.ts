/**
 * Shared 10-set fixture for the equivalence suite.
 *
 * Deterministic by construction (a tiny multiplicative congruential stream,
 * no Math.random), sets of 4 to 9 elements over a 64-element universe with
 * overlapping supports and weights spanning two orders of magnitude. Bounds
 * are the elementwise max so the rejection sketcher runs too.
 */

import { Dataset, WeightedSetData, elementwiseMaxBounds, makeSet } from "../src/dataset.js";

const UNIVERSE = 64;

function* mcg(seed: number): Generator<number> {
  let state = seed >>> 0;
  for (;;) {
    state = (Math.imul(state, 48271) + 11) >>> 0;
    yield state / 2 ** 32;
  }
}

export function fixtureDataset(): Dataset {
  const rand = mcg(0xbeef);
  const next = () => rand.next().value as number;
  const sets: WeightedSetData[] = [];
  for (let doc = 0; doc < 10; doc++) {
    const size = 4 + Math.floor(next() * 6);
    const entries: Array<[number, number]> = [];
    const used = new Set<number>();
    // a small shared core keeps some pairs genuinely similar
    for (const k of [7, 21]) {
      if (next() < 0.7) {
        used.add(k);
        entries.push([k, 0.25 + Math.round(next() * 64) / 16]);
      }
    }
    while (entries.length < size) {
      const k = Math.floor(next() * UNIVERSE);
      if (!used.has(k)) {
        used.add(k);
        entries.push([k, 0.05 + Math.round(next() * 160) / 32]);
      }
    }
    sets.push(makeSet(UNIVERSE, entries));
  }
  return { universe: UNIVERSE, sets, bounds: elementwiseMaxBounds(sets) };
}
