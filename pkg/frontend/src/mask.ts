import type { Gate, Topology } from './types.js';

/**
 * Mutable per-slice decoding state. Mirrors the primary component's
 * masking rules exactly; the mask-parity test checks this bit-for-bit
 * against `mcqmap masks`.
 */
export class DecoderState {
  remainingCapacity: number[];
  /** Gate partner already placed: qubit -> core it is pinned to. */
  pendingFriend: Map<number, number>;
  /** Pairs with both endpoints still unallocated. */
  remainingPairs: number;
  currentRow: number[];
  friends: Map<number, number>;

  constructor(numQubits: number, gates: Gate[], topo: Topology) {
    this.remainingCapacity = [...topo.capacities];
    this.pendingFriend = new Map();
    this.remainingPairs = gates.length;
    this.currentRow = new Array(numQubits).fill(-1);
    this.friends = new Map();
    for (const [q1, q2] of gates) {
      this.friends.set(q1, q2);
      this.friends.set(q2, q1);
    }
  }
}

/**
 * Valid cores for qubit q given the current partial slice.
 *
 * Placing the first endpoint of a gate reserves two capacity units and
 * pins the partner; a core stays unmasked only if, after the placement,
 * every remaining unallocated pair can still fit somewhere
 * (sum over cores of floor(capacity / 2) >= remaining pairs).
 */
export function validCores(state: DecoderState, q: number): boolean[] {
  const caps = state.remainingCapacity;
  const numCores = caps.length;
  const pinned = state.pendingFriend.get(q);
  if (pinned !== undefined) {
    return caps.map((_, c) => c === pinned);
  }
  const friend = state.friends.get(q);
  const need = friend !== undefined ? 2 : 1;
  const gAfter = friend !== undefined ? state.remainingPairs - 1 : state.remainingPairs;
  const mask = caps.map((cap) => cap >= need);
  if (mask.some(Boolean)) {
    let totalFloor = 0;
    for (const cap of caps) totalFloor += Math.floor(cap / 2);
    for (let c = 0; c < numCores; c++) {
      if (!mask[c]) continue;
      const floorAfter =
        totalFloor - Math.floor(caps[c] / 2) + Math.floor((caps[c] - need) / 2);
      if (floorAfter < gAfter) mask[c] = false;
    }
  }
  if (!mask.some(Boolean)) {
    throw new Error(`no valid core for qubit ${q}`);
  }
  return mask;
}

/** Commit qubit q to a core, updating reservations. */
export function commit(state: DecoderState, q: number, core: number): void {
  if (state.pendingFriend.has(q)) {
    state.pendingFriend.delete(q); // capacity was reserved with the partner
  } else {
    const friend = state.friends.get(q);
    if (friend !== undefined) {
      state.remainingCapacity[core] -= 2;
      state.pendingFriend.set(friend, core);
      state.remainingPairs -= 1;
    } else {
      state.remainingCapacity[core] -= 1;
    }
  }
  state.currentRow[q] = core;
}
