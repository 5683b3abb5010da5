package fixtures.app;

import java.security.MessageDigest;
import java.security.SecureRandom;
import javax.crypto.Cipher;
import javax.crypto.KeyGenerator;
import javax.crypto.SecretKey;
import javax.crypto.spec.PBEKeySpec;

// Correct usage end to end; this file must stay finding-free.
public class SafeVault {
    public byte[] encrypt(byte[] plaintext) throws Exception {
        KeyGenerator generator = KeyGenerator.getInstance("AES");
        SecureRandom random = new SecureRandom();
        generator.init(256, random);
        SecretKey key = generator.generateKey();
        Cipher cipher = Cipher.getInstance("AES/GCM/NoPadding");
        cipher.init(Cipher.ENCRYPT_MODE, key);
        byte[] ciphertext = cipher.doFinal(plaintext);
        return ciphertext;
    }

    public byte[] fingerprint(byte[] content) throws Exception {
        MessageDigest md = MessageDigest.getInstance("SHA-256");
        md.update(content);
        byte[] digest = md.digest();
        return digest;
    }

    public PBEKeySpec stretch() {
        char[] password = loadPassword();
        SecureRandom random = new SecureRandom();
        byte[] salt = new byte[16];
        random.nextBytes(salt);
        PBEKeySpec spec = new PBEKeySpec(password, salt, 310000, 256);
        spec.clearPassword();
        return spec;
    }
}
