/**
 * Pure HTML renderers; the app assigns their output to the DOM.
 *
 * Views bind exclusively to the six public-record fields and stamp payload
 * fields. No confidential disclosure content exists in the portal's types,
 * so none can render.
 */

import type { PublicRecord, RegistryStanding, StampVerdict } from './types.js';

export function escapeHtml(value: string): string {
  return value
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;')
    .replace(/'/g, '&#39;');
}

type StatusVariant = 'active' | 'pending' | 'revoked';

const STATUS_VARIANTS: Record<string, StatusVariant> = {
  OnMarket: 'active',
  PreDeployment: 'pending',
  Recalled: 'revoked',
  Withdrawn: 'revoked',
};

export function renderStatusBadge(status: string): string {
  const variant = STATUS_VARIANTS[status] ?? 'pending';
  return `<span class="badge badge-${variant}">${escapeHtml(status)}</span>`;
}

export function renderRecordRow(record: PublicRecord): string {
  return `
    <tr>
      <td class="mono">${escapeHtml(record.identifier)}</td>
      <td>${escapeHtml(record.developer_legal_name)}</td>
      <td>${escapeHtml(record.family_trade_name)}</td>
      <td>${escapeHtml(record.version_name)}</td>
      <td>${renderStatusBadge(record.status)}</td>
      <td>${escapeHtml(record.registration_date)}</td>
    </tr>`;
}

export function renderResults(records: PublicRecord[], total: number): string {
  if (records.length === 0) {
    return `<p class="empty-state">No registered models match.</p>`;
  }
  const rows = records.map(renderRecordRow).join('');
  return `
    <p class="result-count">${total} registered model version${total === 1 ? '' : 's'}</p>
    <table class="results">
      <thead>
        <tr>
          <th>Identifier</th><th>Developer</th><th>Family</th>
          <th>Version</th><th>Status</th><th>Registered</th>
        </tr>
      </thead>
      <tbody>${rows}</tbody>
    </table>`;
}

export function renderErrorBanner(message: string): string {
  return `<div class="error-banner" role="alert">${escapeHtml(message)}</div>`;
}

function renderPayloadRows(verdict: StampVerdict): string {
  if (verdict.status === 'Invalid') {
    return '';
  }
  const { payload } = verdict;
  const rows: [string, string][] = [
    ['Identifier', payload.id],
    ['Developer', payload.dev],
    ['Family', payload.fam],
    ['Version', payload.ver],
    ['Status at issuance', payload.status],
    ['Issued', new Date(payload.iat * 1000).toISOString()],
    ['Expires', new Date(payload.exp * 1000).toISOString()],
  ];
  return `
    <dl class="stamp-payload">
      ${rows
        .map(([label, value]) => `<dt>${label}</dt><dd>${escapeHtml(value)}</dd>`)
        .join('')}
    </dl>`;
}

function renderStanding(standing: RegistryStanding | null): string {
  if (standing === null) {
    return '';
  }
  switch (standing.kind) {
    case 'active':
      return `<p class="standing standing-ok">Registration is active in the live registry
        (current status: ${renderStatusBadge(standing.record.status)}).</p>`;
    case 'revoked':
      return `<p class="standing standing-revoked">Stamp valid, registration no longer
        active: the live registry lists this model as
        ${renderStatusBadge(standing.record.status)}.</p>`;
    case 'not-found':
      return `<p class="standing standing-revoked">Stamp valid, but the identifier is not
        present in the live registry.</p>`;
    case 'unavailable':
      return `<p class="standing standing-unknown">Live registry unreachable; the stamp was
        verified offline only.</p>`;
  }
}

export function renderVerdict(
  verdict: StampVerdict,
  standing: RegistryStanding | null
): string {
  const badge =
    verdict.status === 'Valid'
      ? '<span class="verdict verdict-valid">Valid</span>'
      : verdict.status === 'Expired'
        ? '<span class="verdict verdict-expired">Expired</span>'
        : '<span class="verdict verdict-invalid">Invalid</span>';
  const reason =
    verdict.status === 'Invalid'
      ? `<p class="verdict-reason">${escapeHtml(verdict.reason)}</p>`
      : '';
  const expiredNote =
    verdict.status === 'Expired'
      ? `<p class="verdict-reason">The stamp's validity window has lapsed; a current
         stamp is reissued at each semiannual attestation.</p>`
      : '';
  return `${badge}${reason}${expiredNote}${renderPayloadRows(verdict)}${renderStanding(standing)}`;
}
