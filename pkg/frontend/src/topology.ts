import type { Topology } from './types.js';

/** All-to-all connected cores with uniform capacity. */
export function makeA2a(numCores: number, capacity: number): Topology {
  const distances: number[][] = [];
  for (let i = 0; i < numCores; i++) {
    distances.push(Array.from({ length: numCores }, (_, j) => (i === j ? 0 : 1)));
  }
  return { capacities: new Array(numCores).fill(capacity), distances };
}

/** rows x cols mesh of cores (4-neighbor), uniform capacity, BFS distances. */
export function makeGrid(rows: number, cols: number, capacity: number): Topology {
  const n = rows * cols;
  const neighbors: number[][] = Array.from({ length: n }, () => []);
  for (let r = 0; r < rows; r++) {
    for (let c = 0; c < cols; c++) {
      const i = r * cols + c;
      if (r + 1 < rows) {
        neighbors[i].push(i + cols);
        neighbors[i + cols].push(i);
      }
      if (c + 1 < cols) {
        neighbors[i].push(i + 1);
        neighbors[i + 1].push(i);
      }
    }
  }
  const distances: number[][] = [];
  for (let src = 0; src < n; src++) {
    const dist = new Array(n).fill(-1);
    dist[src] = 0;
    const queue = [src];
    while (queue.length) {
      const u = queue.shift()!;
      for (const v of neighbors[u]) {
        if (dist[v] < 0) {
          dist[v] = dist[u] + 1;
          queue.push(v);
        }
      }
    }
    distances.push(dist);
  }
  return { capacities: new Array(n).fill(capacity), distances };
}
