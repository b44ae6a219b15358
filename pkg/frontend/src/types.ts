/** Shared types for the portal. Only public-surface data ever reaches views. */

/** The six public fields served by the registry; nothing else is rendered. */
export interface PublicRecord {
  identifier: string;
  developer_legal_name: string;
  family_trade_name: string;
  version_name: string;
  status: string;
  registration_date: string;
}

export interface SearchResponse {
  query: string;
  page: number;
  total: number;
  results: PublicRecord[];
}

export interface VerifyRegistrationResponse {
  registered: boolean;
  record?: PublicRecord;
}

export interface StampPayload {
  id: string;
  dev: string;
  fam: string;
  ver: string;
  status: string;
  iat: number;
  exp: number;
}

export type StampVerdict =
  | { status: 'Valid'; payload: StampPayload }
  | { status: 'Expired'; payload: StampPayload }
  | { status: 'Invalid'; reason: string };

/** Live-registry cross-check attached to a Valid verdict. */
export type RegistryStanding =
  | { kind: 'active'; record: PublicRecord }
  | { kind: 'revoked'; record: PublicRecord }
  | { kind: 'not-found' }
  | { kind: 'unavailable' };
