/** DOM bootstrap: binds the controller to the static page. */

import { RegistryClient } from './api.js';
import { PortalController } from './controller.js';

function apiBaseUrl(): string {
  const meta = document.querySelector('meta[name="registry-api-base"]');
  return meta?.getAttribute('content') ?? '';
}

export function bootstrap(root: Document = document): void {
  const client = new RegistryClient(apiBaseUrl());
  const controller = new PortalController(client);

  const searchInput = root.getElementById('search-input') as HTMLInputElement;
  const searchButton = root.getElementById('search-button') as HTMLButtonElement;
  const resultsPane = root.getElementById('search-results') as HTMLElement;
  const errorPane = root.getElementById('search-error') as HTMLElement;
  const stampInput = root.getElementById('stamp-input') as HTMLTextAreaElement;
  const verifyButton = root.getElementById('verify-button') as HTMLButtonElement;
  const verdictPane = root.getElementById('stamp-verdict') as HTMLElement;

  async function runSearch(): Promise<void> {
    const update = await controller.search(searchInput.value);
    if (update !== null) {
      resultsPane.innerHTML = update.resultsHtml;
      errorPane.innerHTML = update.errorHtml;
    }
  }

  searchButton.addEventListener('click', () => void runSearch());
  searchInput.addEventListener('keydown', (event) => {
    if (event.key === 'Enter') {
      void runSearch();
    }
  });
  verifyButton.addEventListener('click', async () => {
    verdictPane.innerHTML = '<p class="pending">Verifying…</p>';
    verdictPane.innerHTML = await controller.verify(stampInput.value);
  });
}

if (typeof document !== 'undefined' && document.getElementById('search-input')) {
  bootstrap();
}
