import { readFileSync, writeFileSync } from 'node:fs';

/** Two-qubit gate as a pair of logical qubit indices. */
export type Gate = [number, number];

/** Sliced circuit: per time slice, a set of disjoint gates. */
export interface SlicedCircuit {
  num_qubits: number;
  slices: Gate[][];
}

/** Core topology with per-core capacities and a hop-distance matrix. */
export interface Topology {
  capacities: number[];
  distances: number[][];
}

/** Allocation: one row of core indices per slice. */
export interface Allocation {
  assignment: number[][];
}

export function readSlicedCircuit(path: string): SlicedCircuit {
  const data = JSON.parse(readFileSync(path, 'utf-8'));
  if (typeof data.num_qubits !== 'number' || !Array.isArray(data.slices)) {
    throw new Error(`${path}: not a sliced-circuit file`);
  }
  return data as SlicedCircuit;
}

export function writeSlicedCircuit(path: string, circuit: SlicedCircuit): void {
  writeFileSync(path, JSON.stringify(circuit));
}

export function writeAllocation(path: string, alloc: Allocation): void {
  writeFileSync(path, JSON.stringify(alloc));
}

/** Total inter-core transfer distance between consecutive slices. */
export function allocationCost(assignment: number[][], distances: number[][]): number {
  let total = 0;
  for (let t = 1; t < assignment.length; t++) {
    const prev = assignment[t - 1];
    const cur = assignment[t];
    for (let q = 0; q < cur.length; q++) {
      total += distances[prev[q]][cur[q]];
    }
  }
  return total;
}
