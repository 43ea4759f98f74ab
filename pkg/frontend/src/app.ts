import { AdvisorClient } from './api.js';
import { AdvisorStore } from './state.js';
import { renderApp } from './render.js';
import { OBJECTIVES, type EconOverrides, type ObjectiveId } from './schema.js';

export const FUELS = ['electricity', 'natural_gas', 'propane', 'fuel_oil'] as const;

const OBJECTIVE_LABELS: Record<ObjectiveId, string> = {
  max_co2_reduction: 'Biggest CO2 cut',
  min_dpy: 'Fastest payback',
};

function controlsHtml(): string {
  const objectiveButtons = OBJECTIVES.map(
    (id) =>
      `<label><input type="radio" name="objective" id="objective-${id}" value="${id}"` +
      `${id === 'max_co2_reduction' ? ' checked' : ''}> ${OBJECTIVE_LABELS[id]}</label>`,
  ).join('\n');
  const rateInputs = FUELS.map(
    (fuel) =>
      `<label>${fuel} (USD/kWh) <input id="override-rate-${fuel}" size="8"></label>`,
  ).join('\n');
  return `
    <section id="query-panel">
      <textarea id="description" rows="5" cols="70"
        placeholder="Describe the home: type, size, decade built, heating, windows..."></textarea>
      <div>
        ${objectiveButtons}
        <label><input type="checkbox" id="mask-toggle"> Terse description</label>
        <button id="submit">Get recommendations</button>
      </div>
    </section>
    <section id="overrides-panel">
      <strong>What-if rates</strong>
      <label>discount rate <input id="override-discount" size="8"></label>
      ${rateInputs}
      <button id="apply-overrides">Apply and re-query</button>
      <span id="override-error"></span>
    </section>
    <p id="status"></p>
    <p id="prototype"></p>
    <div id="results"></div>
  `;
}

function input(root: HTMLElement, id: string): HTMLInputElement {
  return root.querySelector(`#${id}`) as HTMLInputElement;
}

/**
 * Read the overrides panel. Returns undefined when every field is blank and
 * an error string when something non-blank fails to parse as a number.
 */
export function readOverrides(
  root: HTMLElement,
): { overrides: EconOverrides | undefined } | { error: string } {
  const overrides: EconOverrides = {};
  const discountRaw = input(root, 'override-discount').value.trim();
  if (discountRaw !== '') {
    const discount = Number(discountRaw);
    if (!Number.isFinite(discount)) return { error: 'discount rate is not a number' };
    overrides.discount_rate = discount;
  }
  const rates: Record<string, number> = {};
  for (const fuel of FUELS) {
    const raw = input(root, `override-rate-${fuel}`).value.trim();
    if (raw === '') continue;
    const rate = Number(raw);
    if (!Number.isFinite(rate)) return { error: `${fuel} rate is not a number` };
    rates[fuel] = rate;
  }
  if (Object.keys(rates).length > 0) overrides.utility_rates = rates;
  return {
    overrides: Object.keys(overrides).length > 0 ? overrides : undefined,
  };
}

export interface App {
  store: AdvisorStore;
  /** resolves when the measure catalog has been fetched for labels */
  ready: Promise<void>;
}

export function initApp(root: HTMLElement, client: AdvisorClient): App {
  root.innerHTML = controlsHtml();
  const store = new AdvisorStore(client);
  const measureLabels = new Map<string, string>();

  store.subscribe((state) => renderApp(root, state, measureLabels));

  const ready = client
    .measures()
    .then((catalog) => {
      for (const row of catalog.measures) {
        if (!measureLabels.has(row.measure)) {
          measureLabels.set(row.measure, row.label);
        }
      }
    })
    .catch(() => {
      // labels are cosmetic; raw measure ids still render
    });

  input(root, 'description').addEventListener('input', (event) => {
    store.setDescription((event.target as HTMLTextAreaElement).value);
  });

  (root.querySelector('#submit') as HTMLButtonElement).addEventListener(
    'click',
    () => void store.submit(),
  );

  for (const id of OBJECTIVES) {
    input(root, `objective-${id}`).addEventListener('change', () => {
      store.setObjective(id);
    });
  }

  input(root, 'mask-toggle').addEventListener('change', (event) => {
    store.setMasked((event.target as HTMLInputElement).checked);
  });

  (root.querySelector('#apply-overrides') as HTMLButtonElement).addEventListener(
    'click',
    () => {
      const result = readOverrides(root);
      const errorSpan = root.querySelector('#override-error') as HTMLElement;
      if ('error' in result) {
        errorSpan.textContent = result.error;
        return;
      }
      errorSpan.textContent = '';
      store.setOverrides(result.overrides);
      void store.submit();
    },
  );

  return { store, ready };
}
