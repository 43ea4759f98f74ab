import type { AppState } from './state.js';
import type { RankedEntry } from './schema.js';

// Values are rendered exactly as the service sent them; all rounding and
// unit handling happens server-side.

const COLUMNS: Array<{ key: keyof RankedEntry; heading: string }> = [
  { key: 'co2_reduction_kg', heading: 'CO2 cut (kg/yr)' },
  { key: 'net_site_energy_reduction_kwh', heading: 'Energy cut (kWh/yr)' },
  { key: 'energy_cost_saving_usd', heading: 'Bill saving (USD/yr)' },
  { key: 'retrofit_cost_usd', heading: 'Installed cost (USD)' },
  { key: 'dpy', heading: 'Payback (yr)' },
];

export function formatValue(value: number | null): string {
  return value === null ? 'no payback' : String(value);
}

export function renderApp(
  root: HTMLElement,
  state: AppState,
  measureLabels: Map<string, string>,
): void {
  const status = root.querySelector('#status');
  if (status) {
    status.textContent = state.loading
      ? 'querying...'
      : state.error
        ? `error: ${state.error}`
        : '';
  }

  const prototype = root.querySelector('#prototype');
  if (prototype) {
    prototype.textContent = state.response
      ? `matched ${state.response.prototype.building_id}` +
        (state.response.overrides_applied ? ' (custom rates applied)' : '')
      : '';
  }

  const results = root.querySelector('#results');
  if (!results) return;
  results.textContent = '';
  if (!state.response) return;

  const entries = state.response.recommendations[state.objective];
  if (entries.length === 0) {
    const empty = document.createElement('p');
    empty.textContent = 'no options qualify under this objective';
    results.appendChild(empty);
    return;
  }

  const table = document.createElement('table');
  const head = document.createElement('tr');
  for (const text of ['#', 'Measure', ...COLUMNS.map((c) => c.heading)]) {
    const th = document.createElement('th');
    th.textContent = text;
    head.appendChild(th);
  }
  table.appendChild(head);

  for (const entry of entries) {
    const row = document.createElement('tr');
    row.className = 'entry';
    const cells = [
      String(entry.rank),
      measureLabels.get(entry.measure) ?? entry.measure,
      ...COLUMNS.map((c) => formatValue(entry[c.key] as number | null)),
    ];
    for (const text of cells) {
      const td = document.createElement('td');
      td.textContent = text;
      row.appendChild(td);
    }
    table.appendChild(row);
  }
  results.appendChild(table);
}
