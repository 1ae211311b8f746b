import * as tf from '@tensorflow/tfjs';
import { appendFileSync, writeFileSync } from 'node:fs';
import type { SlicedCircuit, Topology } from './types.js';
import { allocationCost } from './types.js';
import { randomSlicedCircuit } from './circuits.js';
import { PolicyParams, PolicyConfig, DEFAULT_CONFIG, rollout, episodeLogProbs } from './policy.js';
import { Rng } from './rng.js';

export interface TrainConfig {
  policy: PolicyConfig;
  numSlices: number;
  maxGatesPerSlice: number;
  epochs: number;
  circuitsPerEpoch: number;
  batchSize: number;
  learningRate: number;
  heldOutSize: number;
  seed: number;
}

export const DEFAULT_TRAIN_CONFIG: TrainConfig = {
  policy: DEFAULT_CONFIG,
  numSlices: 8,
  maxGatesPerSlice: 4,
  epochs: 10,
  circuitsPerEpoch: 512,
  batchSize: 64,
  learningRate: 1e-3,
  heldOutSize: 64,
  seed: 0,
};

export function meanGreedyCost(
  params: PolicyParams,
  circuits: SlicedCircuit[],
  topo: Topology,
  rng: Rng,
): number {
  const result = rollout(params, circuits, topo, 'greedy', rng);
  let total = 0;
  for (const assign of result.assignment) {
    total += allocationCost(assign, topo.distances);
  }
  return total / circuits.length;
}

export interface TrainOutcome {
  params: PolicyParams;
  log: { epoch: number; meanCost: number; baselineCost: number }[];
}

/**
 * REINFORCE with a greedy-rollout baseline. The baseline is a frozen
 * copy of the policy, replaced at the end of an epoch whenever the
 * current policy scores better on a held-out circuit set.
 */
export function trainReinforce(
  config: TrainConfig,
  topo: Topology,
  logPath?: string,
  onEpoch?: (epoch: number, meanCost: number, baselineCost: number) => void,
): TrainOutcome {
  const rng = new Rng(config.seed);
  const params = new PolicyParams(config.policy, config.seed + 1);
  const baseline = new PolicyParams(config.policy, config.seed + 1);
  baseline.copyFrom(params);
  const optimizer = tf.train.adam(config.learningRate);

  const heldOut: SlicedCircuit[] = [];
  for (let i = 0; i < config.heldOutSize; i++) {
    heldOut.push(
      randomSlicedCircuit(
        config.policy.numQubits, config.numSlices, config.maxGatesPerSlice, rng,
      ),
    );
  }
  if (logPath) writeFileSync(logPath, 'epoch,mean_cost,baseline_cost\n');
  const log: TrainOutcome['log'] = [];

  for (let epoch = 0; epoch < config.epochs; epoch++) {
    let epochCost = 0;
    const batches = Math.floor(config.circuitsPerEpoch / config.batchSize);
    for (let batchIdx = 0; batchIdx < batches; batchIdx++) {
      const circuits: SlicedCircuit[] = [];
      for (let i = 0; i < config.batchSize; i++) {
        circuits.push(
          randomSlicedCircuit(
            config.policy.numQubits, config.numSlices, config.maxGatesPerSlice, rng,
          ),
        );
      }
      const sampled = rollout(params, circuits, topo, 'sample', rng);
      const sampleCosts = sampled.assignment.map((a) =>
        allocationCost(a, topo.distances),
      );
      const baselineRollout = rollout(baseline, circuits, topo, 'greedy', rng);
      const baselineCosts = baselineRollout.assignment.map((a) =>
        allocationCost(a, topo.distances),
      );
      const advantage = sampleCosts.map((c, i) => c - baselineCosts[i]);
      epochCost += sampleCosts.reduce((a, c) => a + c, 0) / sampleCosts.length;

      optimizer.minimize(() => {
        const logp = episodeLogProbs(params, circuits, topo, sampled);
        return logp.mul(tf.tensor1d(advantage)).mean() as tf.Scalar;
      }, false, params.variables());
    }
    const meanCost = epochCost / batches;
    const currentHeldOut = meanGreedyCost(params, heldOut, topo, rng);
    const baselineHeldOut = meanGreedyCost(baseline, heldOut, topo, rng);
    if (currentHeldOut < baselineHeldOut) baseline.copyFrom(params);
    log.push({ epoch, meanCost, baselineCost: baselineHeldOut });
    if (logPath) {
      appendFileSync(logPath, `${epoch},${meanCost},${baselineHeldOut}\n`);
    }
    onEpoch?.(epoch, meanCost, baselineHeldOut);
  }
  baseline.dispose();
  return { params, log };
}
