import { AdvisorClient } from './api.js';
import { initApp } from './app.js';

// override via <script>window.ADVISOR_API_BASE = "..."</script> before this module
declare global {
  interface Window {
    ADVISOR_API_BASE?: string;
  }
}

const base = window.ADVISOR_API_BASE ?? 'http://127.0.0.1:8021';
const root = document.getElementById('app');
if (!root) throw new Error('missing #app container');

const { store } = initApp(root, new AdvisorClient(base));

new AdvisorClient(base)
  .health()
  .then((health) => {
    const banner = document.getElementById('backend');
    if (banner) banner.textContent = `connected, ${health.buildings} buildings loaded`;
  })
  .catch(() => {
    const banner = document.getElementById('backend');
    if (banner) banner.textContent = `cannot reach the advisor service at ${base}`;
  });

export { store };
