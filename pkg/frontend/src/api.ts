/** Thin client over the registry's public endpoints (the only data source). */

import type { PublicRecord, SearchResponse, VerifyRegistrationResponse } from './types.js';

/** The portal's entire upstream surface: the registry's public endpoints. */
export interface PublicApi {
  searchModels(query: string, page?: number): Promise<SearchResponse>;
  verifyRegistration(identifier: string): Promise<VerifyRegistrationResponse>;
  fetchVerificationKeyPem(): Promise<string>;
  fetchBadgeToken(identifier: string): Promise<string>;
}

export class RegistryClient implements PublicApi {
  constructor(private readonly baseUrl: string) {}

  private async getJson<T>(path: string): Promise<T> {
    const response = await fetch(`${this.baseUrl}${path}`);
    if (!response.ok) {
      throw new Error(`registry responded ${response.status}`);
    }
    return (await response.json()) as T;
  }

  searchModels(query: string, page = 1): Promise<SearchResponse> {
    const params = new URLSearchParams({ q: query, page: String(page) });
    return this.getJson<SearchResponse>(`/v1/public/search?${params}`);
  }

  verifyRegistration(identifier: string): Promise<VerifyRegistrationResponse> {
    return this.getJson<VerifyRegistrationResponse>(
      `/v1/public/verify/${encodeURIComponent(identifier)}`
    );
  }

  async fetchVerificationKeyPem(): Promise<string> {
    const body = await this.getJson<{ algorithm: string; pem: string }>('/v1/public/key');
    if (body.algorithm !== 'Ed25519') {
      throw new Error(`unsupported stamp algorithm ${body.algorithm}`);
    }
    return body.pem;
  }

  async fetchBadgeToken(identifier: string): Promise<string> {
    const body = await this.getJson<{ identifier: string; token: string }>(
      `/v1/public/badge/${encodeURIComponent(identifier)}`
    );
    return body.token;
  }
}

export type { PublicRecord };
