/**
 * Portal view logic, kept free of DOM access so it is testable headless.
 *
 * At most one search is in flight from the user's point of view: responses
 * arriving for anything but the latest query are dropped (latest wins).
 */

import type { PublicApi } from './api.js';
import { renderErrorBanner, renderResults, renderVerdict } from './render.js';
import type { RegistryStanding, StampVerdict } from './types.js';
import { importVerificationKey, verifyStampToken } from './verify.js';

export interface ViewUpdate {
  resultsHtml: string;
  errorHtml: string;
}

export class PortalController {
  private searchSequence = 0;
  private verificationKey: CryptoKey | null = null;

  constructor(
    private readonly client: PublicApi,
    private readonly now: () => number = () => Math.floor(Date.now() / 1000)
  ) {}

  /** Run a search; stale responses are discarded (latest query wins). */
  async search(query: string): Promise<ViewUpdate | null> {
    const sequence = ++this.searchSequence;
    if (!query.trim()) {
      return { resultsHtml: renderResults([], 0), errorHtml: '' };
    }
    try {
      const response = await this.client.searchModels(query);
      if (sequence !== this.searchSequence) {
        return null; // superseded by a newer search
      }
      return {
        resultsHtml: renderResults(response.results, response.total),
        errorHtml: '',
      };
    } catch {
      if (sequence !== this.searchSequence) {
        return null;
      }
      // no stale results alongside the banner
      return {
        resultsHtml: '',
        errorHtml: renderErrorBanner(
          'The registry service is unreachable. Please try again.'
        ),
      };
    }
  }

  private async key(): Promise<CryptoKey> {
    if (this.verificationKey === null) {
      const pem = await this.client.fetchVerificationKeyPem();
      this.verificationKey = await importVerificationKey(pem);
    }
    return this.verificationKey;
  }

  /**
   * Verify a pasted stamp in the browser (the token is never sent to the
   * server) and, when the signature holds, cross-check live standing.
   */
  async verify(tokenText: string): Promise<string> {
    let verdict: StampVerdict;
    try {
      verdict = await verifyStampToken(tokenText, await this.key(), this.now());
    } catch {
      return renderErrorBanner(
        'Could not fetch the registry verification key. Please try again.'
      );
    }
    let standing: RegistryStanding | null = null;
    if (verdict.status === 'Valid') {
      standing = await this.checkStanding(verdict.payload.id);
    }
    return renderVerdict(verdict, standing);
  }

  private async checkStanding(identifier: string): Promise<RegistryStanding> {
    try {
      const response = await this.client.verifyRegistration(identifier);
      if (!response.registered || !response.record) {
        return { kind: 'not-found' };
      }
      const revoked =
        response.record.status === 'Recalled' || response.record.status === 'Withdrawn';
      return revoked
        ? { kind: 'revoked', record: response.record }
        : { kind: 'active', record: response.record };
    } catch {
      return { kind: 'unavailable' };
    }
  }
}
