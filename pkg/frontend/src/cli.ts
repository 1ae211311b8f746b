import { readFileSync, writeFileSync } from 'node:fs';
import { parseArgs } from 'node:util';
import { readSlicedCircuit, writeAllocation, allocationCost } from './types.js';
import type { Topology } from './types.js';
import { makeA2a, makeGrid } from './topology.js';
import { PolicyParams, rollout } from './policy.js';
import { trainReinforce, DEFAULT_TRAIN_CONFIG } from './train.js';
import { Rng } from './rng.js';

function parseTopology(spec: string): Topology {
  const parts = spec.split(':');
  if (parts[0] === 'a2a' && parts.length === 3) {
    return makeA2a(Number(parts[1]), Number(parts[2]));
  }
  if (parts[0] === 'grid' && parts.length === 3) {
    const [rows, cols] = parts[1].split('x').map(Number);
    return makeGrid(rows, cols, Number(parts[2]));
  }
  return JSON.parse(readFileSync(spec, 'utf-8'));
}

function usage(): never {
  console.error(
    'usage: cli.ts train --out weights.json [--topology a2a:4:2] [--epochs N] ' +
      '[--seed N] [--log train.csv]\n' +
      '       cli.ts map --circuit sliced.json --topology SPEC ' +
      '--weights weights.json --out alloc.json',
  );
  process.exit(2);
}

function cmdTrain(args: string[]): void {
  const { values } = parseArgs({
    args,
    options: {
      topology: { type: 'string', default: 'a2a:4:2' },
      epochs: { type: 'string', default: String(DEFAULT_TRAIN_CONFIG.epochs) },
      seed: { type: 'string', default: '0' },
      out: { type: 'string' },
      log: { type: 'string' },
    },
  });
  if (!values.out) usage();
  const config = {
    ...DEFAULT_TRAIN_CONFIG,
    epochs: Number(values.epochs),
    seed: Number(values.seed),
  };
  const topo = parseTopology(values.topology!);
  const { params } = trainReinforce(config, topo, values.log, (epoch, cost, base) => {
    console.log(`epoch ${epoch}: mean_cost=${cost.toFixed(2)} baseline=${base.toFixed(2)}`);
  });
  writeFileSync(values.out, JSON.stringify(params.toJSON()));
  console.log(`saved weights to ${values.out}`);
}

function cmdMap(args: string[]): void {
  const { values } = parseArgs({
    args,
    options: {
      circuit: { type: 'string' },
      topology: { type: 'string' },
      weights: { type: 'string' },
      out: { type: 'string' },
    },
  });
  if (!values.circuit || !values.topology || !values.weights || !values.out) usage();
  const circuit = readSlicedCircuit(values.circuit);
  const topo = parseTopology(values.topology);
  const params = PolicyParams.fromJSON(JSON.parse(readFileSync(values.weights, 'utf-8')));
  const result = rollout(params, [circuit], topo, 'greedy', new Rng(0));
  writeAllocation(values.out, { assignment: result.assignment[0] });
  console.log(`cost=${allocationCost(result.assignment[0], topo.distances)}`);
}

const [command, ...rest] = process.argv.slice(2);
if (command === 'train') cmdTrain(rest);
else if (command === 'map') cmdMap(rest);
else usage();
