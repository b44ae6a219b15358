/**
 * Rendering: public fields only, empty/error states, and the non-leak check
 * against the seeded fixture produced by the registry acceptance suite.
 */

import { readFileSync } from 'node:fs';
import { dirname, join } from 'node:path';
import { fileURLToPath } from 'node:url';
import { describe, expect, it } from 'vitest';

import {
  escapeHtml,
  renderErrorBanner,
  renderResults,
  renderStatusBadge,
  renderVerdict,
} from '../src/render.js';
import type { PublicRecord, SearchResponse, VerifyRegistrationResponse } from '../src/types.js';

const here = dirname(fileURLToPath(import.meta.url));
const fixturePath = join(here, '..', '..', 'shared', 'portal-fixture.json');

interface PortalFixture {
  search_response: SearchResponse;
  verify_responses: Record<string, VerifyRegistrationResponse>;
  revoked_identifier: string;
  sentinels: string[];
}

const fixture = JSON.parse(readFileSync(fixturePath, 'utf-8')) as PortalFixture;

const sampleRecord: PublicRecord = {
  identifier: 'MR-2025-ABCDEFGHJK-M',
  developer_legal_name: 'Acme AI Inc',
  family_trade_name: 'Frontier',
  version_name: 'frontier-1',
  status: 'OnMarket',
  registration_date: '2025-03-01',
};

describe('search rendering', () => {
  it('renders every public field of every fixture record', () => {
    const { results, total } = fixture.search_response;
    const html = renderResults(results, total);
    for (const record of results) {
      expect(html).toContain(record.identifier);
      expect(html).toContain(escapeHtml(record.developer_legal_name));
      expect(html).toContain(escapeHtml(record.family_trade_name));
      expect(html).toContain(escapeHtml(record.version_name));
      expect(html).toContain(record.registration_date);
    }
  });

  it('renders no confidential sentinel from the seeded fixture', () => {
    const html =
      renderResults(fixture.search_response.results, fixture.search_response.total) +
      Object.values(fixture.verify_responses)
        .map((response) => (response.record ? renderResults([response.record], 1) : ''))
        .join('');
    for (const sentinel of fixture.sentinels) {
      expect(html).not.toContain(sentinel);
    }
  });

  it('shows the explicit empty state', () => {
    expect(renderResults([], 0)).toContain('No registered models match');
  });

  it('escapes markup in field values', () => {
    const hostile = { ...sampleRecord, developer_legal_name: '<script>x</script>' };
    const html = renderResults([hostile], 1);
    expect(html).not.toContain('<script>');
    expect(html).toContain('&lt;script&gt;');
  });

  it('renders an error banner', () => {
    expect(renderErrorBanner('down')).toContain('role="alert"');
  });

  it('maps statuses to badge variants', () => {
    expect(renderStatusBadge('OnMarket')).toContain('badge-active');
    expect(renderStatusBadge('Recalled')).toContain('badge-revoked');
    expect(renderStatusBadge('Withdrawn')).toContain('badge-revoked');
    expect(renderStatusBadge('PreDeployment')).toContain('badge-pending');
  });
});

describe('verdict rendering', () => {
  const payload = {
    id: sampleRecord.identifier,
    dev: 'Acme AI Inc',
    fam: 'Frontier',
    ver: 'frontier-1',
    status: 'OnMarket',
    iat: 1_750_000_000,
    exp: 1_780_000_000,
  };

  it('renders a valid verdict with payload fields', () => {
    const html = renderVerdict({ status: 'Valid', payload }, { kind: 'active', record: sampleRecord });
    expect(html).toContain('verdict-valid');
    expect(html).toContain(payload.id);
    expect(html).toContain('Registration is active');
  });

  it('flags a revoked registration behind a valid stamp', () => {
    const revoked = { ...sampleRecord, status: 'Recalled' };
    const html = renderVerdict({ status: 'Valid', payload }, { kind: 'revoked', record: revoked });
    expect(html).toContain('registration no longer');
    expect(html).toContain('badge-revoked');
  });

  it('renders invalid and expired verdicts', () => {
    expect(renderVerdict({ status: 'Invalid', reason: 'signature mismatch' }, null)).toContain(
      'verdict-invalid'
    );
    expect(renderVerdict({ status: 'Expired', payload }, null)).toContain('verdict-expired');
  });
});

describe('static confidentiality check over view sources', () => {
  it('binds no confidential field name in any view module', () => {
    const confidentialFieldNames = [
      'business_registration_number',
      'contact_email',
      'contact_phone',
      'emergency_contact',
      'registered_address',
      'principal_place_of_business',
      'optional_disclosures',
      'total_parameters',
      'active_parameters_avg',
      'training_flop',
      'post_training_flop',
      'training_tokens',
      'license_summary',
      'weights_public',
      'training_data_public',
      'source_code_public',
      'open_subcomponents',
      'token_count',
      'category_notes',
      'architecture_type',
      'innovations_summary',
      'layer_count',
      'layer_types',
      'cluster_capacity_flops',
      'cloud_providers',
      'chip_count',
      'chip_models',
      'weights_protection',
      'training_data_protection',
      'source_code_protection',
      'pii_protection',
      'declared_security_tier',
      'methodology',
      'red_team_summary',
      'identified_risks',
      'alignment_insights',
      'plain_language_description',
      'primary_purposes',
      'alternative_uses',
      'documentation_links',
      'safety_kpis',
      'kpi_thresholds',
      'response_protocols',
      'review_policy',
    ];
    for (const module of ['render.ts', 'app.ts', 'controller.ts', 'types.ts', 'api.ts']) {
      const source = readFileSync(join(here, '..', 'src', module), 'utf-8');
      for (const field of confidentialFieldNames) {
        expect(source, `${module} references ${field}`).not.toContain(field);
      }
    }
  });
});
