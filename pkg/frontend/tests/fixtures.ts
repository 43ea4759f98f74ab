import type { RankedEntry, RecommendResponse } from '../src/schema.js';

export function entry(patch: Partial<RankedEntry>): RankedEntry {
  return {
    rank: 1,
    measure: 'wall_insulation',
    co2_reduction_kg: 100.1,
    net_site_energy_reduction_kwh: 200.2,
    energy_cost_saving_usd: 50.5,
    retrofit_cost_usd: 1000,
    dpy: 10,
    ...patch,
  };
}

export const SAMPLE_RESPONSE: RecommendResponse = {
  query_fields: { building_type: 'single_family_detached' },
  prototype: { building_id: 'bldg-00042', distance: 0.0, n_tied: 1 },
  overrides_applied: false,
  recommendations: {
    max_co2_reduction: [
      entry({
        rank: 1,
        measure: 'pv_installation',
        co2_reduction_kg: 5225.6,
        net_site_energy_reduction_kwh: 12531.4,
        energy_cost_saving_usd: 1879.7,
        retrofit_cost_usd: 34699,
        dpy: 28,
      }),
      entry({ rank: 2, measure: 'hvac_upgrade', co2_reduction_kg: 912.3 }),
      entry({
        rank: 3,
        measure: 'window_replacement',
        co2_reduction_kg: 401.9,
        dpy: null,
      }),
    ],
    min_dpy: [
      entry({ rank: 1, measure: 'lighting_replacement', dpy: 1 }),
      entry({ rank: 2, measure: 'hvac_upgrade', dpy: 2 }),
      entry({ rank: 3, measure: 'air_sealing', dpy: 6 }),
    ],
  },
};

export const SAMPLE_MEASURES = {
  measures: [
    {
      measure: 'pv_installation',
      hvac_subtype: null,
      label: 'Rooftop solar',
      modified_parameters: [],
      cost_rule: 'pv_tiered',
    },
    {
      measure: 'lighting_replacement',
      hvac_subtype: null,
      label: 'LED lighting',
      modified_parameters: [],
      cost_rule: 'per_fixture',
    },
  ],
};

/** Minimal stand-in for a fetch Response; the client only touches these. */
export function jsonResponse(body: unknown, status = 200) {
  return {
    ok: status >= 200 && status < 300,
    status,
    json: async () => body,
  };
}

export function deferred<T>() {
  let resolve!: (value: T) => void;
  let reject!: (reason: unknown) => void;
  const promise = new Promise<T>((res, rej) => {
    resolve = res;
    reject = rej;
  });
  return { promise, resolve, reject };
}
