import type { Gate, SlicedCircuit } from './types.js';
import { Rng } from './rng.js';

/**
 * Random sliced circuit: each slice holds 1..maxGates disjoint random
 * pairs. Used for training/evaluation distributions; the JSON matches
 * the primary component's sliced-circuit format.
 */
export function randomSlicedCircuit(
  numQubits: number,
  numSlices: number,
  maxGates: number,
  rng: Rng,
): SlicedCircuit {
  const slices: Gate[][] = [];
  for (let t = 0; t < numSlices; t++) {
    const k = 1 + rng.int(Math.min(maxGates, Math.floor(numQubits / 2)));
    const order = rng.shuffle(Array.from({ length: numQubits }, (_, i) => i));
    const gates: Gate[] = [];
    for (let i = 0; i + 1 < 2 * k; i += 2) {
      const a = order[i];
      const b = order[i + 1];
      gates.push(a < b ? [a, b] : [b, a]);
    }
    slices.push(gates);
  }
  return { num_qubits: numQubits, slices };
}
