import * as tf from '@tensorflow/tfjs';
import type { SlicedCircuit, Topology } from './types.js';
import { DecoderState, validCores, commit } from './mask.js';
import { Rng } from './rng.js';

export interface PolicyConfig {
  numQubits: number;
  dim: number; // d_E = d_H
  heads: number;
  blocks: number;
  logitClip: number;
}

export const DEFAULT_CONFIG: PolicyConfig = {
  numQubits: 8,
  dim: 64,
  heads: 4,
  blocks: 2,
  logitClip: 10,
};

interface EncoderBlockVars {
  wq: tf.Variable;
  wk: tf.Variable;
  wv: tf.Variable;
  wo: tf.Variable;
  ff1: tf.Variable;
  ffb1: tf.Variable;
  ff2: tf.Variable;
  ffb2: tf.Variable;
}

/** All trainable tensors of the allocation policy. */
export class PolicyParams {
  config: PolicyConfig;
  qubitEmb: tf.Variable; // (Q, d)
  wInit: tf.Variable; // (d, d) slice-graph convolution
  encoderBlocks: EncoderBlockVars[];
  padCore: tf.Variable; // (d,) embedding for empty cores
  wSnap: tf.Variable; // (d, d) core-graph convolution
  vCap: tf.Variable; // (d,) capacity projection
  vDist: tf.Variable; // (d,) distance projection
  wCtx: tf.Variable; // (3d, d) context query projection
  wGlimpseK: tf.Variable;
  wGlimpseV: tf.Variable;
  wPointerK: tf.Variable;

  constructor(config: PolicyConfig, seed: number) {
    this.config = config;
    const d = config.dim;
    let counter = seed;
    const init = (shape: number[]) => {
      counter += 1;
      const scale = 1 / Math.sqrt(shape[shape.length - 1]);
      return tf.variable(tf.randomNormal(shape, 0, scale, 'float32', counter));
    };
    this.qubitEmb = init([config.numQubits, d]);
    this.wInit = init([d, d]);
    this.encoderBlocks = [];
    for (let i = 0; i < config.blocks; i++) {
      this.encoderBlocks.push({
        wq: init([d, d]),
        wk: init([d, d]),
        wv: init([d, d]),
        wo: init([d, d]),
        ff1: init([d, 2 * d]),
        ffb1: tf.variable(tf.zeros([2 * d])),
        ff2: init([2 * d, d]),
        ffb2: tf.variable(tf.zeros([d])),
      });
    }
    this.padCore = init([d]);
    this.wSnap = init([d, d]);
    this.vCap = init([d]);
    this.vDist = init([d]);
    this.wCtx = init([3 * d, d]);
    this.wGlimpseK = init([d, d]);
    this.wGlimpseV = init([d, d]);
    this.wPointerK = init([d, d]);
  }

  variables(): tf.Variable[] {
    const vars = [
      this.qubitEmb,
      this.wInit,
      this.padCore,
      this.wSnap,
      this.vCap,
      this.vDist,
      this.wCtx,
      this.wGlimpseK,
      this.wGlimpseV,
      this.wPointerK,
    ];
    for (const b of this.encoderBlocks) {
      vars.push(b.wq, b.wk, b.wv, b.wo, b.ff1, b.ffb1, b.ff2, b.ffb2);
    }
    return vars;
  }

  copyFrom(other: PolicyParams): void {
    const mine = this.variables();
    const theirs = other.variables();
    for (let i = 0; i < mine.length; i++) mine[i].assign(theirs[i]);
  }

  toJSON(): unknown {
    return {
      config: this.config,
      weights: this.variables().map((v) => ({
        shape: v.shape,
        values: Array.from(v.dataSync()),
      })),
    };
  }

  static fromJSON(data: any): PolicyParams {
    const params = new PolicyParams(data.config, 0);
    const vars = params.variables();
    data.weights.forEach((w: { shape: number[]; values: number[] }, i: number) => {
      vars[i].assign(tf.tensor(w.values, w.shape));
    });
    return params;
  }

  dispose(): void {
    for (const v of this.variables()) v.dispose();
  }
}

/** Symmetric-normalized slice adjacency with self-loops, (T, Q, Q). */
export function sliceAdjacency(circuit: SlicedCircuit): tf.Tensor3D {
  const q = circuit.num_qubits;
  const t = circuit.slices.length;
  const data = new Float32Array(t * q * q);
  for (let s = 0; s < t; s++) {
    const deg = new Array(q).fill(1); // self-loops
    for (const [a, b] of circuit.slices[s]) {
      deg[a] += 1;
      deg[b] += 1;
    }
    const base = s * q * q;
    for (let i = 0; i < q; i++) {
      data[base + i * q + i] = 1 / deg[i];
    }
    for (const [a, b] of circuit.slices[s]) {
      const w = 1 / Math.sqrt(deg[a] * deg[b]);
      data[base + a * q + b] = w;
      data[base + b * q + a] = w;
    }
  }
  return tf.tensor3d(data, [t, q, q]);
}

/** Sinusoidal positional encoding, (T, d). */
export function positionalEncoding(numSlices: number, dim: number): tf.Tensor2D {
  const data = new Float32Array(numSlices * dim);
  for (let t = 0; t < numSlices; t++) {
    for (let i = 0; i < dim; i++) {
      const angle = t / Math.pow(10000, (2 * Math.floor(i / 2)) / dim);
      data[t * dim + i] = i % 2 === 0 ? Math.sin(angle) : Math.cos(angle);
    }
  }
  return tf.tensor2d(data, [numSlices, dim]);
}

/** Normalize over all leading axes per feature (batch-norm style, no stats). */
function featureNorm(x: tf.Tensor): tf.Tensor {
  const flat = x.reshape([-1, x.shape[x.shape.length - 1]!]);
  const { mean, variance } = tf.moments(flat, 0);
  return x.sub(mean).div(variance.add(1e-5).sqrt());
}

function multiHeadAttention(
  params: PolicyParams,
  block: EncoderBlockVars,
  x: tf.Tensor3D, // (B, T, d)
): tf.Tensor3D {
  const { dim, heads } = params.config;
  const dh = dim / heads;
  const [b, t] = [x.shape[0], x.shape[1]];
  const split = (w: tf.Variable) =>
    x
      .reshape([b * t, dim])
      .matMul(w as unknown as tf.Tensor2D)
      .reshape([b, t, heads, dh])
      .transpose([0, 2, 1, 3]); // (B, h, T, dh)
  const q = split(block.wq);
  const k = split(block.wk);
  const v = split(block.wv);
  const scores = q.matMul(k, false, true).div(Math.sqrt(dh)); // (B, h, T, T)
  const attn = tf.softmax(scores, -1);
  const out = attn
    .matMul(v)
    .transpose([0, 2, 1, 3])
    .reshape([b * t, dim])
    .matMul(block.wo as unknown as tf.Tensor2D)
    .reshape([b, t, dim]);
  return out as tf.Tensor3D;
}

/**
 * Per-slice initial embeddings: graph convolution over the interaction
 * graph with self-loops, then max-pool over qubits. (B, T, d), before
 * positional encoding.
 */
export function initEmbedding(
  params: PolicyParams,
  circuits: SlicedCircuit[],
): tf.Tensor3D {
  const { dim } = params.config;
  const b = circuits.length;
  const t = circuits[0].slices.length;
  const q = circuits[0].num_qubits;
  const adj = tf.stack(circuits.map(sliceAdjacency)); // (B,T,Q,Q)
  const conv = adj
    .reshape([b * t, q, q])
    .matMul(params.qubitEmb.expandDims(0).tile([b * t, 1, 1]) as tf.Tensor3D)
    .reshape([b * t * q, dim])
    .matMul(params.wInit as unknown as tf.Tensor2D)
    .relu()
    .reshape([b * t, q, dim]);
  return conv.max(1).reshape([b, t, dim]) as tf.Tensor3D;
}

/**
 * Encoder: positional encoding plus self-attention blocks over the
 * initial slice embeddings. Returns slice embeddings and their mean.
 */
export function encodeCircuits(
  params: PolicyParams,
  circuits: SlicedCircuit[],
): { hS: tf.Tensor3D; hX: tf.Tensor2D } {
  const { dim } = params.config;
  const b = circuits.length;
  const t = circuits[0].slices.length;
  const pooled = initEmbedding(params, circuits);
  let x = pooled.add(positionalEncoding(t, dim).expandDims(0)) as tf.Tensor3D;
  for (const block of params.encoderBlocks) {
    x = featureNorm(x.add(multiHeadAttention(params, block, x))) as tf.Tensor3D;
    const ff = x
      .reshape([b * t, dim])
      .matMul(block.ff1 as unknown as tf.Tensor2D)
      .add(block.ffb1)
      .relu()
      .matMul(block.ff2 as unknown as tf.Tensor2D)
      .add(block.ffb2)
      .reshape([b, t, dim]);
    x = featureNorm(x.add(ff)) as tf.Tensor3D;
  }
  const hX = x.mean(1) as tf.Tensor2D;
  return { hS: x, hX };
}

/** Normalized core adjacency from the distance matrix (edges = distance 1). */
export function coreAdjacency(topo: Topology): tf.Tensor2D {
  const c = topo.capacities.length;
  const deg = new Array(c).fill(1);
  for (let i = 0; i < c; i++) {
    for (let j = 0; j < c; j++) {
      if (i !== j && topo.distances[i][j] === 1) deg[i] += 1;
    }
  }
  const data = new Float32Array(c * c);
  for (let i = 0; i < c; i++) {
    data[i * c + i] = 1 / deg[i];
    for (let j = 0; j < c; j++) {
      if (i !== j && topo.distances[i][j] === 1) {
        data[i * c + j] = 1 / Math.sqrt(deg[i] * deg[j]);
      }
    }
  }
  return tf.tensor2d(data, [c, c]);
}

/**
 * Core embeddings for one slice: max-pool the embeddings of the qubits
 * each core held in the previous slice (padding embedding when empty),
 * then one graph convolution over the core connectivity.
 */
export function snapshotEncode(
  params: PolicyParams,
  prevAssign: number[][] | null, // (B, Q) or null before the first slice
  numCores: number,
  coreAdjNorm: tf.Tensor2D,
  batch: number,
): tf.Tensor3D {
  const { dim, numQubits } = params.config;
  let pooled: tf.Tensor3D;
  if (prevAssign === null) {
    pooled = params.padCore.reshape([1, 1, dim]).tile([batch, numCores, 1]) as tf.Tensor3D;
  } else {
    const onehot = new Float32Array(batch * numCores * numQubits);
    for (let i = 0; i < batch; i++) {
      for (let q = 0; q < numQubits; q++) {
        onehot[i * numCores * numQubits + prevAssign[i][q] * numQubits + q] = 1;
      }
    }
    const memb = tf.tensor3d(onehot, [batch, numCores, numQubits]);
    const emb = params.qubitEmb.reshape([1, 1, numQubits, dim]);
    const masked = emb.mul(memb.expandDims(3)).add(memb.expandDims(3).sub(1).mul(1e9));
    const occupied = memb.max(2).expandDims(2); // (B, C, 1)
    pooled = masked
      .max(2)
      .mul(occupied)
      .add(params.padCore.reshape([1, 1, dim]).mul(tf.scalar(1).sub(occupied))) as tf.Tensor3D;
  }
  const conv = coreAdjNorm
    .expandDims(0)
    .tile([batch, 1, 1])
    .matMul(pooled)
    .reshape([batch * numCores, dim])
    .matMul(params.wSnap as unknown as tf.Tensor2D)
    .relu()
    .reshape([batch, numCores, dim]);
  return conv as tf.Tensor3D;
}

/**
 * Pointer logits for one decode step: dynamic core embeddings (remaining
 * capacity and transfer distance projections), glimpse cross-attention,
 * then clipped compatibilities with -inf on masked cores.
 */
export function decodeLogits(
  params: PolicyParams,
  context: tf.Tensor2D, // (B, 3d)
  coreEmb: tf.Tensor3D, // (B, C, d)
  caps: tf.Tensor2D, // (B, C)
  dist: tf.Tensor2D, // (B, C)
  mask: tf.Tensor2D, // (B, C) 1 = allowed
): tf.Tensor2D {
  const { dim, logitClip } = params.config;
  const dyn = coreEmb
    .add(caps.expandDims(2).mul(params.vCap.reshape([1, 1, dim])))
    .add(dist.expandDims(2).mul(params.vDist.reshape([1, 1, dim]))) as tf.Tensor3D;
  const query = context.matMul(params.wCtx as unknown as tf.Tensor2D); // (B, d)
  const b = dyn.shape[0];
  const c = dyn.shape[1];
  const flat = dyn.reshape([b * c, dim]);
  const gk = flat.matMul(params.wGlimpseK as unknown as tf.Tensor2D).reshape([b, c, dim]);
  const gv = flat.matMul(params.wGlimpseV as unknown as tf.Tensor2D).reshape([b, c, dim]);
  const negInf = mask.sub(1).mul(1e9); // 0 where allowed, -1e9 where masked
  const gScores = gk.matMul(query.expandDims(2)).squeeze([2]).div(Math.sqrt(dim)).add(negInf);
  const gAttn = tf.softmax(gScores, -1); // (B, C)
  const glimpse = query.add(gv.mul(gAttn.expandDims(2)).sum(1)); // (B, d)
  const pk = flat.matMul(params.wPointerK as unknown as tf.Tensor2D).reshape([b, c, dim]);
  const compat = pk
    .matMul(glimpse.expandDims(2))
    .squeeze([2])
    .div(Math.sqrt(dim))
    .tanh()
    .mul(logitClip);
  return compat.add(negInf) as tf.Tensor2D;
}

/** One recorded decode step of a batched rollout. */
export interface StepRecord {
  caps: number[][]; // (B, C) remaining capacity before the step
  dist: number[][]; // (B, C) transfer distance row, zeros on slice 0
  mask: number[][]; // (B, C) 0/1
  actions: number[]; // (B,)
  qubit: number;
  slice: number;
}

export interface RolloutResult {
  steps: StepRecord[];
  prevAssignPerSlice: (number[][] | null)[]; // indexed by slice
  assignment: number[][][]; // (B, T, Q)
}

/**
 * Batched rollout in lockstep (same Q and T across the batch). Masks and
 * state updates run in plain JS; the policy provides step probabilities.
 */
export function rollout(
  params: PolicyParams,
  circuits: SlicedCircuit[],
  topo: Topology,
  mode: 'greedy' | 'sample',
  rng: Rng,
): RolloutResult {
  const b = circuits.length;
  const t = circuits[0].slices.length;
  const q = circuits[0].num_qubits;
  const numCores = topo.capacities.length;
  const coreAdjNorm = coreAdjacency(topo);
  const { hS, hX } = tf.tidy(() => {
    const enc = encodeCircuits(params, circuits);
    return { hS: tf.keep(enc.hS), hX: tf.keep(enc.hX) };
  });

  const steps: StepRecord[] = [];
  const prevAssignPerSlice: (number[][] | null)[] = [];
  const assignment: number[][][] = circuits.map(() => []);
  let prevAssign: number[][] | null = null;

  for (let s = 0; s < t; s++) {
    prevAssignPerSlice.push(prevAssign ? prevAssign.map((r) => [...r]) : null);
    const coreEmb = tf.tidy(() =>
      tf.keep(snapshotEncode(params, prevAssign, numCores, coreAdjNorm, b)),
    );
    const states = circuits.map(
      (circ) => new DecoderState(q, circ.slices[s], topo),
    );
    for (let qi = 0; qi < q; qi++) {
      const caps = states.map((st) => [...st.remainingCapacity]);
      const dist = states.map((_, i) =>
        prevAssign ? [...topo.distances[prevAssign[i][qi]]] : new Array(numCores).fill(0),
      );
      const mask = states.map((st) => validCores(st, qi).map((m) => (m ? 1 : 0)));
      const probs = tf.tidy(() => {
        const context = tf.concat(
          [
            hX,
            hS.slice([0, s, 0], [b, 1, params.config.dim]).squeeze([1]),
            params.qubitEmb.slice([qi, 0], [1, params.config.dim]).tile([b, 1]),
          ],
          1,
        ) as tf.Tensor2D;
        const logits = decodeLogits(
          params,
          context,
          coreEmb as tf.Tensor3D,
          tf.tensor2d(caps),
          tf.tensor2d(dist),
          tf.tensor2d(mask),
        );
        return tf.softmax(logits, -1).arraySync() as number[][];
      });
      const actions: number[] = [];
      for (let i = 0; i < b; i++) {
        const weights = probs[i].map((p, c) => (mask[i][c] ? p : 0));
        const action =
          mode === 'greedy'
            ? weights.indexOf(Math.max(...weights))
            : rng.categorical(weights);
        commit(states[i], qi, action);
        actions.push(action);
      }
      steps.push({ caps, dist, mask, actions, qubit: qi, slice: s });
    }
    prevAssign = states.map((st) => [...st.currentRow]);
    for (let i = 0; i < b; i++) assignment[i].push([...prevAssign[i]]);
    coreEmb.dispose();
  }
  hS.dispose();
  hX.dispose();
  return { steps, prevAssignPerSlice, assignment };
}

/**
 * Differentiable sum of log-probabilities of the recorded actions, per
 * episode. Recomputes every forward pass so gradients flow into all
 * policy parameters.
 */
export function episodeLogProbs(
  params: PolicyParams,
  circuits: SlicedCircuit[],
  topo: Topology,
  result: RolloutResult,
): tf.Tensor1D {
  const b = circuits.length;
  const numCores = topo.capacities.length;
  const coreAdjNorm = coreAdjacency(topo);
  const { hS, hX } = encodeCircuits(params, circuits);
  const coreEmbBySlice = result.prevAssignPerSlice.map((prev) =>
    snapshotEncode(params, prev, numCores, coreAdjNorm, b),
  );
  let total = tf.zeros([b]) as tf.Tensor1D;
  for (const step of result.steps) {
    const context = tf.concat(
      [
        hX,
        hS.slice([0, step.slice, 0], [b, 1, params.config.dim]).squeeze([1]),
        params.qubitEmb.slice([step.qubit, 0], [1, params.config.dim]).tile([b, 1]),
      ],
      1,
    ) as tf.Tensor2D;
    const logits = decodeLogits(
      params,
      context,
      coreEmbBySlice[step.slice],
      tf.tensor2d(step.caps),
      tf.tensor2d(step.dist),
      tf.tensor2d(step.mask),
    );
    const logp = tf.logSoftmax(logits, -1);
    const chosen = tf
      .oneHot(tf.tensor1d(step.actions, 'int32'), numCores)
      .mul(logp)
      .sum(1) as tf.Tensor1D;
    total = total.add(chosen);
  }
  return total;
}
