/**
 * Offline stamp verification, in the browser.
 *
 * Token format: "mrs1." + base64url(payload) + "." + base64url(signature),
 * Ed25519 over the exact payload bytes. Decoding is strict: unpadded
 * base64url only, re-encoding must reproduce the segment, so no two
 * distinct token strings share a decoding. Tokens are never sent anywhere;
 * only the published public key is fetched.
 */

import type { StampPayload, StampVerdict } from './types.js';

const STAMP_PREFIX = 'mrs1';
const B64URL = /^[A-Za-z0-9_-]+$/;
const REQUIRED_KEYS: (keyof StampPayload)[] = ['id', 'dev', 'fam', 'ver', 'status', 'iat', 'exp'];

function b64urlEncode(bytes: Uint8Array): string {
  let binary = '';
  for (const byte of bytes) {
    binary += String.fromCharCode(byte);
  }
  return btoa(binary).replace(/\+/g, '-').replace(/\//g, '_').replace(/=+$/, '');
}

function b64urlDecodeStrict(segment: string): Uint8Array {
  if (!segment || !B64URL.test(segment) || segment.length % 4 === 1) {
    throw new Error('not base64url');
  }
  const padded = segment.replace(/-/g, '+').replace(/_/g, '/');
  const binary = atob(padded + '='.repeat((4 - (padded.length % 4)) % 4));
  const bytes = new Uint8Array(binary.length);
  for (let i = 0; i < binary.length; i++) {
    bytes[i] = binary.charCodeAt(i);
  }
  if (b64urlEncode(bytes) !== segment) {
    throw new Error('non-canonical base64url');
  }
  return bytes;
}

export function pemToSpkiDer(pem: string): Uint8Array {
  const body = pem.replace(/-----[^-]+-----/g, '').replace(/\s+/g, '');
  const binary = atob(body);
  const bytes = new Uint8Array(binary.length);
  for (let i = 0; i < binary.length; i++) {
    bytes[i] = binary.charCodeAt(i);
  }
  return bytes;
}

export async function importVerificationKey(pem: string): Promise<CryptoKey> {
  return crypto.subtle.importKey(
    'spki',
    pemToSpkiDer(pem) as unknown as BufferSource,
    { name: 'Ed25519' },
    false,
    ['verify']
  );
}

function invalid(reason: string): StampVerdict {
  return { status: 'Invalid', reason };
}

function parsePayload(bytes: Uint8Array): StampPayload | null {
  let parsed: unknown;
  try {
    parsed = JSON.parse(new TextDecoder('utf-8', { fatal: true }).decode(bytes));
  } catch {
    return null;
  }
  if (typeof parsed !== 'object' || parsed === null || Array.isArray(parsed)) {
    return null;
  }
  const record = parsed as Record<string, unknown>;
  for (const key of REQUIRED_KEYS) {
    if (!(key in record)) {
      return null;
    }
  }
  const { id, dev, fam, ver, status, iat, exp } = record;
  if (
    typeof id !== 'string' ||
    typeof dev !== 'string' ||
    typeof fam !== 'string' ||
    typeof ver !== 'string' ||
    typeof status !== 'string' ||
    !Number.isInteger(iat) ||
    !Number.isInteger(exp) ||
    (iat as number) >= (exp as number)
  ) {
    return null;
  }
  return { id, dev, fam, ver, status, iat: iat as number, exp: exp as number };
}

/** Verify a stamp token against the registry's public key; never throws. */
export async function verifyStampToken(
  token: string,
  verificationKey: CryptoKey,
  nowSeconds: number
): Promise<StampVerdict> {
  if (typeof token !== 'string') {
    return invalid('token must be a string');
  }
  const parts = token.trim().split('.');
  if (parts.length !== 3) {
    return invalid('expected three dot-separated segments');
  }
  const [prefix, payloadSegment, signatureSegment] = parts as [string, string, string];
  if (prefix !== STAMP_PREFIX) {
    return invalid(`unknown format version "${prefix}"`);
  }
  let payloadBytes: Uint8Array;
  let signature: Uint8Array;
  try {
    payloadBytes = b64urlDecodeStrict(payloadSegment);
  } catch {
    return invalid('payload segment is not canonical base64url');
  }
  try {
    signature = b64urlDecodeStrict(signatureSegment);
  } catch {
    return invalid('signature segment is not canonical base64url');
  }
  if (signature.length !== 64) {
    return invalid('signature must be 64 bytes');
  }
  let signatureOk = false;
  try {
    signatureOk = await crypto.subtle.verify(
      { name: 'Ed25519' },
      verificationKey,
      signature as unknown as BufferSource,
      payloadBytes as unknown as BufferSource
    );
  } catch {
    return invalid('verification error');
  }
  if (!signatureOk) {
    return invalid('signature mismatch');
  }
  const payload = parsePayload(payloadBytes);
  if (payload === null) {
    return invalid('payload is not a well-formed stamp');
  }
  if (nowSeconds > payload.exp) {
    return { status: 'Expired', payload };
  }
  return { status: 'Valid', payload };
}
