/**
 * Wire-format contracts for the advisor service.
 *
 * Everything the UI knows about the API lives here; responses that do not
 * match these shapes are rejected before they reach any state.
 */

import { z } from 'zod';

export const OBJECTIVES = ['max_co2_reduction', 'min_dpy'] as const;
export type ObjectiveId = (typeof OBJECTIVES)[number];

export const healthResponseSchema = z.object({
  status: z.literal('ok'),
  buildings: z.number().int().nonnegative(),
});
export type HealthResponse = z.infer<typeof healthResponseSchema>;

export const measureRowSchema = z.object({
  measure: z.string().min(1),
  hvac_subtype: z.string().nullable(),
  label: z.string().min(1),
  modified_parameters: z.array(
    z.object({
      name: z.string(),
      value: z.number(),
      unit: z.string(),
    }),
  ),
  cost_rule: z.string(),
});
export type MeasureRow = z.infer<typeof measureRowSchema>;

export const measuresResponseSchema = z.object({
  measures: z.array(measureRowSchema),
});
export type MeasuresResponse = z.infer<typeof measuresResponseSchema>;

// one ranked retrofit option; dpy null means the option never pays back
export const rankedEntrySchema = z.object({
  rank: z.number().int().positive(),
  measure: z.string().min(1),
  co2_reduction_kg: z.number(),
  net_site_energy_reduction_kwh: z.number(),
  energy_cost_saving_usd: z.number(),
  retrofit_cost_usd: z.number(),
  dpy: z.number().int().nullable(),
});
export type RankedEntry = z.infer<typeof rankedEntrySchema>;

export const recommendResponseSchema = z.object({
  query_fields: z.record(z.string(), z.unknown()),
  prototype: z.object({
    building_id: z.string().min(1),
    distance: z.number().nonnegative(),
    n_tied: z.number().int().positive(),
  }),
  overrides_applied: z.boolean(),
  recommendations: z.object({
    max_co2_reduction: z.array(rankedEntrySchema),
    min_dpy: z.array(rankedEntrySchema),
  }),
});
export type RecommendResponse = z.infer<typeof recommendResponseSchema>;

export interface EconOverrides {
  discount_rate?: number;
  utility_rates?: Record<string, number>;
}

export interface RecommendRequest {
  description: string;
  overrides?: EconOverrides;
}
